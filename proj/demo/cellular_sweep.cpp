// Probability that the conditions hold in a small cellular layout as the cells shrink.
#include "tinregion/cellsim.hpp"

#include <cstdio>

using namespace tin;

int main() {
  for (Geometry geo : {Geometry::linear_sectorized, Geometry::circular}) {
    std::printf("%s\n  r[m]   L  p_convex  p_optimal\n",
                geo == Geometry::linear_sectorized ? "two sectorized cells" : "ring of 4 cells");
    for (int L = 1; L <= 3; ++L)
      for (double r : {80.0, 120.0, 160.0, 200.0, 243.0}) {
        ScenarioParams p;
        p.geometry = geo;
        p.users_per_cell = L;
        p.site_radius_m = r;
        p.trials = 500;
        auto pt = estimate_probabilities(p);
        std::printf("  %5.0f  %d  %8.3f  %9.3f\n", r, L, pt.p_convexity, pt.p_optimality);
      }
  }
}
