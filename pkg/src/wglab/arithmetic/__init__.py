"""Number-theoretic primitives and prime windows."""

from .core import (
    HuaModulus,
    crt,
    divisors,
    eta_any,
    eta_exponent,
    euler_phi,
    factorize,
    hua_modulus,
    is_prime,
    kth_power_residues,
    mobius,
    powmod_array,
    sigma,
    sigma_bruteforce,
    small_primes,
    valuation,
)
from .density import AlphaMinusEstimate, alpha_minus_estimate
from .primes import PrimeWindow, decode_window, encode_window, primes_in, sieve_range, used_cache_keys

__all__ = [
    "AlphaMinusEstimate", "HuaModulus", "PrimeWindow", "alpha_minus_estimate", "crt",
    "decode_window", "divisors", "encode_window", "eta_any", "eta_exponent", "euler_phi",
    "factorize", "hua_modulus", "is_prime", "kth_power_residues", "mobius", "powmod_array",
    "primes_in", "sieve_range", "used_cache_keys", "sigma", "sigma_bruteforce", "small_primes", "valuation",
]
