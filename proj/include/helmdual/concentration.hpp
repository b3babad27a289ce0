#pragma once

#include "helmdual/groundstate.hpp"

#include <optional>
#include <vector>

namespace helmdual {

/// Truncated center of mass of |psi|^{q'} and |phi|^{p'} in original
/// coordinates: beta = int chi(eps x) w(x) dx / int w(x) dx with
/// chi(y) = y for |y| <= rho and rho y/|y| beyond. Throws ZeroState.
struct Barycenters {
    std::vector<double> psi;
    std::vector<double> phi;
};
Barycenters barycenter(const DualProblem& prob, const DualPair& state, double eps, double rho);

/// Frame bookkeeping between the dilated frame (coefficients P(eps x)) and
/// the physical frame with explicit frequency k: amplitude k^{-beta1} and a
/// k-contracted lattice. Round-trip with invert=true is the identity.
ScalarField frame_scaling_map(const ScalarField& u, double k, const AdmissibleExponents& exps,
                                bool second_component = false, bool invert = false);

struct SweepConfig {
    std::vector<double> eps_list;   // strictly decreasing, positive
    CoefficientSpec P;
    CoefficientSpec Q;
    double rho = 0.0;
    Grid grid;
    double delta = 0.0;             // <= 0 picks the plan default
    AdmissibleExponents exponents;
    SolverConfig solver;
    int multistart = 1;
    int threads = 1;
};

struct EpsRecord {
    double eps = 0.0;
    double c_eps = 0.0;
    std::vector<double> barycenter_psi;
    std::vector<double> barycenter_phi;
    double profile_distance_u = 0.0;   // L^q, after alignment
    double profile_distance_v = 0.0;   // L^p
    int iterations = 0;
    bool converged = false;
    int distinct_solutions = 0;
};

struct ConcentrationReport {
    std::vector<EpsRecord> entries;
    double c_M = 0.0;
    bool limit_converged = false;
    bool common_max = true;    // discrete M_P intersect M_Q nonempty
    std::shared_ptr<Solution> limit;
    std::shared_ptr<Solution> finest; // smallest-eps converged solution
};

/// The concentration experiment: for each eps solve the dilated-coefficient
/// problem (multistart, keep the lowest converged energy), record energies,
/// barycenters and aligned profile distances against the constant-coefficient
/// limit solution at levels sup P, sup Q. Per-eps failures are recorded as
/// non-converged entries and the sweep continues.
ConcentrationReport run_sweep(const SweepConfig& cfg);

/// Aligned relative profile distances (||u - U0(.-a)||_q / ||U0||_q, same in
/// L^p for v), where the lattice shift a comes from the psi barycenter and
/// the global sign is chosen by best match. Throws NotConverged.
std::pair<double, double> align_and_compare(const DualProblem& prob, const Solution& solution,
                                            const Solution& limit, double eps,
                                            const AdmissibleExponents& exps, double rho);

/// Diagnostic upper bound for the ground energy: transplant the limit dual
/// profile to the argmax point x0 with a smooth radial cutoff (1 inside
/// cut_radius/2, 0 outside cut_radius) and coefficient compensation, project
/// onto the Nehari set, and return the projected energy. At small eps it
/// approaches c_M from above and upper-bounds c_eps.
double transplant_energy(const DualProblem& prob, const Solution& limit, double eps,
                         const std::vector<double>& x0, double cut_radius);

} // namespace helmdual
