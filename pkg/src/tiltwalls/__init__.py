"""Exact tilt-stability wall computations on polarised threefolds."""
