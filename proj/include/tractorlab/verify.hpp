#pragma once

// Seeded verification suites shared by the command-line tool and the
// Python module. Every check is exact; an exception inside a check is
// recorded as a failure with its message.

#include <cstdint>
#include <vector>

#include "tractorlab/tractor.hpp"

namespace tractorlab {

/// Tractor identities on `trials` random fields per weight.
std::vector<IdentityResult> verify_identities(int n, std::uint64_t seed, int trials = 20);
/// Random combinations of the CK vector and tensor bases: CK predicates,
/// parallel full prolongations, K/W round trips, top-slot recovery and
/// splitting invariance of the half prolongations.
std::vector<IdentityResult> verify_prolongation(int n, std::uint64_t seed, int trials = 3);
/// Einstein scale 1 + |x|^2: dimension count, agreement of the four
/// Killing-scale verdicts, SKS witnesses, splitting invariance and the
/// new Killing field constructions.
std::vector<IdentityResult> verify_scales(int n, std::uint64_t seed, int trials = 3);

}  // namespace tractorlab
