#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aloha/model.hpp"

namespace aloha {

enum class StabilityMethod {
  Region,           // per-class rate-region inequalities
  Permutation,      // search over per-permutation inequality chains
  Feasibility,      // power-free test: can any power vector stabilize?
};

const char* stability_method_name(StabilityMethod m);

struct StabilityVerdict {
  bool stable = false;
  StabilityMethod method = StabilityMethod::Region;
  // First class whose region inequality fails (Region method, unstable).
  std::optional<std::size_t> violated_class;
  // Permutation certifying membership (Permutation method, stable).
  std::optional<std::vector<std::size_t>> witness_permutation;
};

// Membership in the stability region: for every class n,
//   (phi_n/P_n^delta) * a_n/(1-a_n) < (1 - sum_k phi_k lambda_k a_k)
//                                     / (sum_k P_k^delta lambda_k a_k).
// Inequalities are strict; boundary points are classified unstable. The
// equivalent second form (sums excluding n, with P_n^delta lambda_n isolated)
// is evaluated as well and verified to agree. All-zero arrivals are stable.
StabilityVerdict check_region(const NetworkConfig& config);

// Same decision through the union of per-permutation regions: an ordering
// nu is a witness if for every position n,
//   (phi/P^delta)(a/(1-a)) of nu(n) < (1 - sum_{k<n} phi lambda a)
//        / (sum_{k<n} P^delta lambda a + sum_{k>=n} P^delta lambda),
// with sums over nu(k). Searches permutations lexicographically and returns
// the first witness. Cost is O(N! * N); refuses N above max_classes.
StabilityVerdict check_permutation_region(const NetworkConfig& config,
                                          std::size_t max_classes = 8);

// One step of the sequential saturated-network argument behind the
// permutation regions.
struct DominantStep {
  std::size_t class_index = 0;  // class examined at this step (order[j])
  double arrival_rate = 0.0;
  // Strict threshold the arrival rate must stay below at this step; 0 when
  // the denominator guard trips.
  double threshold = 0.0;
  bool denominator_ok = true;  // false once settled traffic >= channel
  bool holds = false;
  // Steady-state success probabilities of the classes settled before this
  // step (order[0..j-1]), evaluated with the remaining classes saturated.
  std::vector<double> settled_success;
};

struct DominantSequenceReport {
  std::vector<std::size_t> order;
  std::vector<DominantStep> steps;
  // Steady state with every class settled; equals the stationary success
  // probabilities of the full network. Populated only when all steps hold.
  std::vector<double> final_success;

  bool all_hold() const {
    for (const DominantStep& s : steps)
      if (!s.holds) return false;
    return !steps.empty();
  }
};

// Walks the saturated-network sequence in the given class order, reporting
// the per-step arrival-rate threshold, whether it holds, and the
// intermediate steady-state success probabilities. All steps hold exactly
// when `order` certifies stability as a permutation witness.
DominantSequenceReport dominant_sequence_check(const NetworkConfig& config,
                                               std::vector<std::size_t> order);

// The power-free feasibility sum: sum_n phi_n lambda_n a_n/(1-a_n). Some
// power vector stabilizes the network if and only if this is < 1.
double feasibility_margin(const NetworkConfig& config);
bool feasibility_over_powers(const NetworkConfig& config);

}  // namespace aloha
