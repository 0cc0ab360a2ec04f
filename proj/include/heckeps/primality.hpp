#pragma once

#include <cstdint>

namespace heckeps {

// Deterministic Miller-Rabin for the full 64-bit range, witness set
// {2,3,5,7,11,13,17,19,23,29,31,37} (sufficient below 3.3e24).
bool is_prime_u64(uint64_t n);

} // namespace heckeps
