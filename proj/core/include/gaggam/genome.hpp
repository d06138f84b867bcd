#ifndef GAGGAM_GENOME_HPP_
#define GAGGAM_GENOME_HPP_

#include <string>
#include <utility>
#include <vector>

#include "gaggam/gam.hpp"
#include "gaggam/rng.hpp"

namespace gaggam {

// A gene is structurally a TermSpec; the search keeps spline genes inside
// kMinKnots..kMaxKnots and kMinLambda..kMaxLambda.
using Gene = TermSpec;

inline constexpr int kMinKnots = 8;
inline constexpr int kMaxKnots = 20;
inline constexpr double kMinLambda = 0.1;
inline constexpr double kMaxLambda = 10.0;

inline constexpr double kKindProbNone = 0.2;
inline constexpr double kKindProbLinear = 0.3;

inline constexpr double kCrossoverGeneSwapProb = 0.5;
inline constexpr double kInitialMutationRate = 0.15;
inline constexpr double kMutationRateFloor = 0.015;
inline constexpr int kMutationScheduleSpan = 100;

struct Chromosome {
  std::vector<Gene> genes;

  // Stable structural encoding (lambda at 6 decimals); equal keys iff
  // structurally equal genes.  Used as the evaluation memo key.
  std::string canonical_key() const;

  bool operator==(const Chromosome&) const = default;
};

// One gene per feature: kind ~ {none, linear, spline} with probabilities
// {0.2, 0.3, 0.5}; spline genes draw knots ~ UniformInt[8, 20] and
// lambda ~ Uniform[0.1, 10.0]; scale is a fair coin.
Chromosome smart_init(int n_features, Rng& rng);

// With probability crossover_prob the pair mates: every position swaps
// whole genes between the children with probability 1/2.  Otherwise both
// children are clones.  Gene internals are never mixed across parents.
std::pair<Chromosome, Chromosome> uniform_crossover(const Chromosome& a,
                                                    const Chromosome& b,
                                                    double crossover_prob,
                                                    Rng& rng);

// Deterministic mating seam: swap_mask[i] true moves a's gene i into the
// second child and b's into the first.
std::pair<Chromosome, Chromosome> crossover_with_mask(
    const Chromosome& a, const Chromosome& b, const std::vector<bool>& swap_mask);

enum class MutationAction {
  kResampleKind,   // fresh kind (and knots/lambda when spline)
  kPerturbKnots,   // knots += UniformInt[-3,3] \ {0}, clamped
  kPerturbLambda,  // lambda *= exp(Normal(0, 0.5)), clamped
  kFlipScale,
};

// Applies one action to one gene.  Knot/lambda perturbations on a
// non-spline gene fall back to kResampleKind.
Gene mutate_gene(const Gene& gene, MutationAction action, Rng& rng);

// Each gene independently mutates with probability `rate`, applying one
// uniformly chosen action.
Chromosome mutate(const Chromosome& c, double rate, Rng& rng);

// rate(g) = max(0.15 * (1 - g/100), 0.015).
double adaptive_rate(int generation);

ModelSpec to_model_spec(const Chromosome& c);
Chromosome from_model_spec(const ModelSpec& spec);

}  // namespace gaggam

#endif  // GAGGAM_GENOME_HPP_
