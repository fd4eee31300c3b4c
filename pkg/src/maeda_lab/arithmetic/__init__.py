"""Polynomials over finite fields, prime sieves and Chebotarev scans."""
