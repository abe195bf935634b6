#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/piecewise_map.hpp"
#include "varlp/pushforward.hpp"
#include "varlp/space.hpp"

namespace varlp {

enum class Verdict { pass, fail, inconclusive };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

/// Output of every probe: raw series plus a verdict and the label the probe
/// attaches to it (e.g. "fail-of-(M1)").
struct DiagnosticReport {
    std::string probe_name;
    std::map<std::string, double> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> series;
    Verdict verdict = Verdict::inconclusive;
    std::string verdict_label;
    std::string key_name;
    double key_value = 0.0;
    std::string notes;
};

struct TailMajorant {
    double base_point = 0.0;
    double r_exponent = 1.0;
    std::vector<double> values;  ///< (e + |x - x0|)^{-r} at the centers
};

[[nodiscard]] TailMajorant tail_majorant(const GridSpace& space, double base_point, double r);

/**
 * R(n) = rho_p(C_phi f_n) / (n mu(B)) with f_n = n^{1/p} chi_B.
 * fail-of-(M1) if R is strictly increasing with R_last / R_first > growth;
 * pass-of-(M1) if max R / min R <= 2; inconclusive otherwise or when the
 * preimage of B is empty.
 */
struct DichotomyOptions {
    double growth_threshold = 10.0;
    double bounded_factor = 2.0;
};
[[nodiscard]] DiagnosticReport m1_dichotomy_probe(const PiecewiseMap& phi, const ExponentField& p, const Ball& ball,
                                                  std::span<const double> n_list,
                                                  const DichotomyOptions& options = {});

/**
 * max over balls (mu(B) < 1, diam + width/2 < 1/2) and preimage cells x of
 * mu(B)^{p_phi(x) - p+_B}, against exp(K0 * G) with
 * G = max_B [Q (-ln D) - ln c_lower] / (-ln(D + width/2)), D the clipped
 * diameter, Q and c_lower from the Ahlfors fit of the family.
 * c_geom = G / Q goes into the report. Inconclusive outside LH0.
 */
[[nodiscard]] DiagnosticReport lemma_l1i_check(const ExponentField& p, const PiecewiseMap& phi,
                                               std::span<const Ball> family,
                                               const RegularityOptions& options = {});

/**
 * min over balls meeting A (mu(B) < 1) and cells x with phi(x) in A and B of
 * mu(B)^{1 - p(x)/p_phi(x)}, against the floor exp(-K0 * G), G as in
 * lemma_l1i_check. Needs |bracket_minus - 1| <= 1e-9; inconclusive otherwise
 * or when no ball qualifies.
 */
[[nodiscard]] DiagnosticReport lemma_l2_check(const ExponentField& p, const PiecewiseMap& phi, const Ball& A,
                                              std::span<const Ball> family,
                                              const RegularityOptions& options = {});

/// Combines single-level lemma reports from successively refined grids:
/// fails if any level fails or the key value moves by more than `factor`
/// between the first and last level in the harmful direction (growth for
/// the upper bound, decay for the lower bound).
[[nodiscard]] DiagnosticReport lemma_l1i_refinement(std::span<const DiagnosticReport> levels, double factor = 10.0);
[[nodiscard]] DiagnosticReport lemma_l2_refinement(std::span<const DiagnosticReport> levels, double factor = 10.0);

/**
 * integral of h^{p-} directly and by the shells C_0 = B(x0, 1),
 * C_j = {2^{j-1} <= d < 2^j}. Passes if the two agree to 1e-6 relative, the
 * last shell ratio is <= 2^{Q - r p-} + 0.05 and the last increment shrinks.
 * Q defaults to the Ahlfors fit of a standard interior family. Inconclusive
 * when r p- <= Q.
 */
[[nodiscard]] DiagnosticReport tail_majorant_check(const GridSpace& space, const ExponentField& p, double x0,
                                                   double r, std::optional<double> Q = std::nullopt);

/**
 * For each delta: the first cell x_N of U = {u > eps} with
 * mu(U cap B(x_N, delta)) / mu(B) >= 1/2, f_N = mu(B)^{-1/p} chi_{U cap B},
 * and the modular of C_phi f_N restricted to A = phi^{-1}(U cap B). Passes
 * when every restricted modular is >= eps/4 and mu(A) strictly decreases.
 */
[[nodiscard]] DiagnosticReport noncompactness_witness(const PiecewiseMap& phi, const ExponentField& p,
                                                      const PushforwardProfile& profile, double eps,
                                                      std::span<const double> deltas);

struct WeakCompactnessOptions {
    double floor_factor = 0.25;
    std::optional<double> z0;  ///< centre of the shrinking intervals when mu(Omega_1) > 0
};

/**
 * Weak-compactness diagnostic for C_phi on L^{r(.)} with r- = 1.
 *
 * mu(Omega_1) = 0: D(lambda) = max over normalized ball indicators f of
 * lambda^{-1} sum lambda^r |f|^r u width. Pass ("not weakly compact") if
 * M = min u off Omega_1 is positive and D >= floor_factor * M for every
 * lambda; fail ("diagnostic vanishes") if D decreases along the list to
 * below floor_factor * max D.
 *
 * mu(Omega_1) > 0: f_n = chi_{I_n cap Omega_1} / mu(I_n) on intervals
 * I_n = (z0 - 2^{-n}, z0 + 2^{-n}) and the integral of f_n o phi over
 * Omega_1. Pass if the liminf (min over the tail half) is >= floor_factor.
 *
 * r- - 1 above one cell's resolution: inconclusive, reflexive regime.
 */
[[nodiscard]] DiagnosticReport weak_compactness_diagnostic(const PiecewiseMap& phi, const ExponentField& r,
                                                           const PushforwardProfile& profile,
                                                           std::span<const double> lambdas,
                                                           std::span<const Ball> family,
                                                           const WeakCompactnessOptions& options = {});

/// Rows (map index, inf u, D at the smallest lambda, verdict code 0/1/2 for
/// pass/fail/inconclusive). Always inconclusive.
[[nodiscard]] DiagnosticReport conjecture_explorer(std::span<const PiecewiseMap> maps, const ExponentField& r,
                                                   std::span<const double> lambdas, std::span<const Ball> family);

} // namespace varlp
