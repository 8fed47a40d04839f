#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace mechlab {

enum class Exec { Serial, Parallel };

inline constexpr std::uint64_t kDefaultMaxProfiles = 10'000'000;

// Budget from MECHLAB_MAX_PROFILES, falling back to kDefaultMaxProfiles.
std::uint64_t max_profiles();

// Throws ResourceError when count exceeds max_profiles().
void require_within_budget(const mpz_class& count, const std::string& what);

}  // namespace mechlab
