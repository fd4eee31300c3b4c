"""Tower density recursion and the effective lower bound."""
