"""Produce one certificate of each kind and print a one-line verdict for each."""

from sympcert.certifier import (
    PROOF_SCRIPTS,
    QUOTED_CLAIMS,
    check_claims,
    derivation_check,
    nontriviality_certify,
    vanishing_certify,
)


def verdict(label, cert):
    print(f"{label:<44}{cert.outcome}")


def main():
    verdict("vanishing SUPERSINGULAR / RSUPSING", vanishing_certify("SUPERSINGULAR", "RSUPSING", seed=1))
    verdict("vanishing ARCH / RA", vanishing_certify("ARCH", "RA", seed=1))
    cert = nontriviality_certify("RA", seed=1)
    verdict("non-triviality RA", cert)
    for label, w in cert.evidence["witnesses"].items():
        print(f"  witness {label}: value {w['value']}")
    ra_claims = [c for c in QUOTED_CLAIMS if c.relation == "RA"]
    verdict("quoted coefficients RA", check_claims("RA", ra_claims))
    verdict("derivation RSUPSING", derivation_check(PROOF_SCRIPTS["RSUPSING"]))
    print("\nfirst lines of the vanishing certificate:")
    print("\n".join(vanishing_certify("ARCH", "RA", seed=1, trials=3).dumps().splitlines()[:12]))


if __name__ == "__main__":
    main()
