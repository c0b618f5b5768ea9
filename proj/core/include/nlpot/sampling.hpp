#pragma once

// Reproducible random jets.  Every sample i draws from its own generator seeded by
// (seed, i), so results do not depend on how samples are split across threads.

#include "nlpot/symjet.hpp"

#include <cstdint>
#include <random>

namespace nlpot {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Rng sample_rng(std::uint64_t seed, std::uint64_t index);

double normal(Rng& rng);
double uniform(Rng& rng, double lo, double hi);
double log_uniform(Rng& rng, double lo, double hi);

Vector random_vector(Rng& rng, int n);       // iid N(0,1)
Vector random_unit_vector(Rng& rng, int n);
Matrix random_orthogonal(Rng& rng, int n);   // Haar
// GOE-type matrix scaled to spectral norm `scale`
SymMatrix random_symmetric(Rng& rng, int n, double scale = 1.0);
// positive semidefinite with spectral norm at most `scale`; some eigenvalues exactly 0
SymMatrix random_psd(Rng& rng, int n, double scale = 1.0);
// Q diag(d) Q^T with d uniform in [lo, hi]
SymMatrix random_with_spectrum(Rng& rng, int n, double lo, double hi);

struct JetShape {
  bool with_r = false;
  bool with_p = false;
};
Jet2 random_jet(Rng& rng, int n, double scale = 1.0, JetShape shape = {});

}  // namespace nlpot
