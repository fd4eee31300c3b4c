"""Symmetric-group combinatorics: d-cycle censuses and the a(i) sequences."""
