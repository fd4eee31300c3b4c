"""Level-1 modular forms and Hecke characteristic polynomials."""
