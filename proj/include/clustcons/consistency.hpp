#ifndef CLUSTCONS_CONSISTENCY_HPP
#define CLUSTCONS_CONSISTENCY_HPP

#include "clustcons/core.hpp"

#include <cstdint>
#include <string>

/**
 * @file consistency.hpp
 *
 * @brief Checks of how a (before, after) pair of embeddings relates to
 * Kleinberg-style consistency with respect to a fixed partition.
 *
 * All comparisons use the relative tolerance kDistanceTolerance and count
 * equal distances as compliant.
 */

namespace clustcons {

enum class GammaClass { FullGamma, InnerOnly, OuterOnly, NotGamma };

std::string to_string(GammaClass c);

struct ViolationReport {
    std::size_t intra_increased = 0;
    std::size_t inter_decreased = 0;
    std::size_t intra_pairs = 0;
    std::size_t inter_pairs = 0;
    /// Pairs whose distance moved beyond the tolerance, per class.
    std::size_t intra_changed = 0;
    std::size_t inter_changed = 0;
    double violation_percentage = 0.0;
    GammaClass classification = GammaClass::FullGamma;
};

/**
 * @brief Exhaustive scan of all point pairs.
 *
 * NotGamma when a same-cluster distance grew or a cross-cluster distance
 * shrank. Otherwise InnerOnly when cross-cluster distances are all unchanged
 * but some same-cluster distance changed, OuterOnly for the mirror case, and
 * FullGamma in every remaining case (including the identity).
 */
ViolationReport classify_gamma(const Dataset& before, const Dataset& after, const Partition& partition);

struct SamplePlan {
    int target_cluster = 0;
    std::size_t sample_in = 100;
    std::size_t sample_out = 100;
    std::uint64_t seed = 0;
};

/**
 * @brief Percentage of sampled cross pairs (target cluster x rest) whose
 * distance decreased. Samples are drawn without replacement; when a side has
 * fewer points than requested all of them are used.
 */
double sampled_violation_percentage(const Dataset& before, const Dataset& after, const Partition& partition,
                                    const SamplePlan& plan);

struct GravitationalCheck {
    bool consistent = true;
    /// Largest `|mu(S1') - mu(S2')| - |mu(S1) - mu(S2)|` seen; positive when violated.
    double worst_violation = 0.0;
    std::size_t pairs_checked = 0;
    bool exhaustive = false;
};

inline constexpr std::size_t kGravitationalExhaustiveCap = 10;

/**
 * @brief Tests that no pair of disjoint subsets of a cluster has its centroid
 * distance increased. Enumerates every unordered pair of disjoint non-empty
 * subsets for clusters of at most 10 points, otherwise draws `n_samples`
 * random pairs.
 */
GravitationalCheck gravitational_check(const Dataset& before, const Dataset& after, const Partition& partition,
                                       int cluster_id, std::size_t n_samples, std::uint64_t seed);

inline constexpr std::size_t kConvergentCap = 200;

/**
 * @brief Distance order and distance ratios are both preserved: for every two
 * pairs with `d(a) <= d(b)`, `d'(a) <= d'(b)` and `d(a)/d(b) <= d'(a)/d'(b)`.
 *
 * Sorting pairs by `d` reduces the quadratic pair-of-pairs condition to prefix
 * extrema of `d'` and `d'/d`. Refuses datasets above 200 points.
 */
bool convergent_check(const Dataset& before, const Dataset& after);

}  // namespace clustcons

#endif
