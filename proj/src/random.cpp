#include "tractorlab/random.hpp"

#include <vector>

namespace tractorlab {

int Rng::uniform(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

Rational Rng::small_rational(int bound) {
  int p = 0;
  while (p == 0) p = uniform(-bound, bound);
  Rational r(p, uniform(1, bound));
  r.canonicalize();
  return r;
}

Poly random_poly(Rng& rng, int nvars, int max_degree, int max_terms, int coef_bound) {
  std::vector<Term> terms;
  const int count = rng.uniform(1, max_terms);
  for (int k = 0; k < count; ++k) {
    std::vector<int> exps(nvars, 0);
    const int deg = rng.uniform(0, max_degree);
    for (int d = 0; d < deg; ++d) ++exps[rng.uniform(0, nvars - 1)];
    terms.push_back({Monomial::from_exponents(exps), Rational(rng.uniform(-coef_bound, coef_bound))});
  }
  return Poly::from_terms(nvars, std::move(terms));
}

}  // namespace tractorlab
