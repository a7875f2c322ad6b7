// Walk through the six finite invariant sets: points, labels, stationary
// weights and expected Lyapunov exponent at p = 0.5, then one simulated
// trajectory and its cover count.

#include <cstdio>

#include "tosscatch/tosscatch.hpp"

using namespace tosscatch;

int main() {
  for (TacKind kind : kAllTacKinds) {
    const auto set = (kind == TacKind::L3 || kind == TacKind::L5) ? build_tac(kind)
                     : kind == TacKind::L2                       ? build_tac(kind, 3.0)
                                                                 : build_tac(kind, 1.4);
    const auto cfg = set.config(0.5);
    const auto pi = stationary_distribution(build_transition_matrix(set, cfg)).weights;
    std::printf("%s  params (%.6f, %.6f)  E = %.6f\n", std::string(to_string(kind)).c_str(),
                set.params.first, set.params.second, expected_lyapunov(set, cfg));
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::printf("    x = %.9f  pi = %.6f  %s\n", set.points[i], pi[i],
                  to_string(set.labels[i]).c_str());
    }
  }

  const auto l5 = build_tac(TacKind::L5);
  const auto traj = simulate(l5.config(0.5, 1), kDefaultX0, kDefaultTransient, kDefaultKeep);
  std::printf("\nl5 trajectory: %zu kept states, cover count %zu at eps = 1e-6\n",
              traj.kept_states().size(), greedy_cover(traj.kept_states(), 1e-6).count);
  return 0;
}
