#pragma once

// Time-stepping for the renormalized PAM on Q_L with Dirichlet walls:
// second-order Strang splitting with pointwise potential exponentials around
// an exact spectral heat step. Mass, sup and inner-inf are tracked in log
// space so e^{t lambda_1} growth never overflows.

#include <optional>

#include "grid.hpp"
#include "hamiltonian.hpp"

namespace pam {

enum class ICKind { DeltaAtOrigin, UniformOne, Field };

struct InitialCondition {
    ICKind kind = ICKind::UniformOne;
    double smoothing = 0.0;  // delta bump width; defaults to 2 dx when 0
    GridField field;         // used by ICKind::Field

    static InitialCondition delta(double smoothing = 0.0) {
        return InitialCondition{ICKind::DeltaAtOrigin, smoothing, {}};
    }
    static InitialCondition one() { return InitialCondition{ICKind::UniformOne, 0.0, {}}; }
    static InitialCondition from(GridField f) {
        return InitialCondition{ICKind::Field, 0.0, std::move(f)};
    }
};

struct EvolveOptions {
    double inner_exponent = 0.5;  // a in Q_{t^a} for the inner infimum
    int record_stride = 1;        // record every k-th step
    std::vector<double> snapshot_times;
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> log_mass;      // log U_L(t)
    std::vector<double> log_sup;       // log sup_x u(t,x)
    std::vector<double> log_inf_inner; // log inf over Q_{t^a} (nan while t^a < 2dx)
    std::vector<GridField> snapshots;  // u / exp(snapshot_offsets)
    std::vector<double> snapshot_offsets;
    GridField final_field;             // u(T,.) / exp(final_offset)
    double final_offset = 0.0;
    double log_mass_final = 0.0;
};

GridField realize_initial(const BoxSpec& box, const InitialCondition& ic);

EvolutionResult evolve(const BoxSpec& box, const GridField& potential,
                       const InitialCondition& ic, double T, double dt,
                       const EvolveOptions& opt = {});

// Truncated eigenexpansion of u^{delta_x}(t, .) from a computed Spectrum.
struct SpectralSolution {
    GridField field;
    double tail_factor = 0.0;  // e^{t (lambda_n - lambda_1)} of the last kept term
    bool tail_ok = false;      // tail_factor <= 1e-8
};
SpectralSolution spectral_solution(const Spectrum& sp, double x1, double x2, double t);

// log of the total mass of u^{1} from the eigenexpansion:
// log sum_n e^{t lambda_n} <v_n, 1>^2.
double spectral_log_mass(const Spectrum& sp, double t);

// point value u^{delta_x}(t, y) from the expansion
double spectral_point(const Spectrum& sp, double x1, double x2, double y1, double y2,
                      double t);

struct MassVsEigenRecord {
    double t = 0.0;
    double log_mass = 0.0;       // log U_L(t), uniform-one initial condition
    double rate = 0.0;           // (1/t) log U_L(t)
    double lambda1 = 0.0;
    double gap = 0.0;            // lambda_1 - lambda_2
    double spectral_log_mass = 0.0;
    bool spectral_tail_ok = false;
};

struct MassVsEigenResult {
    std::vector<MassVsEigenRecord> records;
    double fitted_decay_exponent = 0.0;  // of |rate - lambda1| against t
    double c_eps = 0.0;
};

MassVsEigenResult mass_vs_eigenvalue_experiment(const BoxSpec& box, const NoiseCoeffs& nc,
                                                double eps, const std::vector<double>& T_list,
                                                double dt, int n_terms,
                                                MollifierKind route = MollifierKind::FourierCutoff);

struct SupInfRecord {
    double t = 0.0;
    double log_sup = 0.0, log_inf_inner = 0.0, log_mass = 0.0;
    double rate_delta_vs_one = 0.0;  // |(1/t)(log U^delta - log U^one)|
};

struct SupInfResult {
    std::vector<SupInfRecord> records;
    double spread_at_final = 0.0;  // (log sup - log inf) / |log U| at max t
};

SupInfResult sup_inf_experiment(const BoxSpec& box, const NoiseCoeffs& nc, double eps,
                                double a, const std::vector<double>& T_list, double dt,
                                MollifierKind route = MollifierKind::FourierCutoff);

} // namespace pam
