#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace addm {

using Radix = std::uint64_t;

/// Prime factorization by trial division, ascending primes.
std::map<std::uint64_t, unsigned> factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n, ascending.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

}  // namespace addm
