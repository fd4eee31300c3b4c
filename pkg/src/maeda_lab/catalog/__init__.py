"""Named reference polynomials."""
