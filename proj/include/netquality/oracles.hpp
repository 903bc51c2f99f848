#pragma once

#include <span>
#include <vector>

#include "netquality/metrics.hpp"
#include "netquality/recommend.hpp"

namespace nq {

// Brute-force reference implementations, written independently of the fast
// paths and meant for small inputs in tests.

/// Nested loops over the snapshot's edge list; bins as in correlation_spectrum.
SpectrumCurve oracle_spectrum(const GraphSnapshot& snapshot, const BeautyProfiles& profiles, int bins = 100);

/// Triple loop over all (v, c) node pairs. Ascending by candidate.
std::vector<Candidate> oracle_candidates(const GraphSnapshot& snapshot, UserIndex u);

/// sum_i sum_j |xi - xj| / (2 n^2 mean).
double oracle_gini(std::span<const double> values);

}  // namespace nq
