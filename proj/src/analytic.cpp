#include "qrabi/analytic.hpp"

#include "qrabi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qrabi {

namespace {

const double kSqrt2 = std::sqrt(2.0);

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

void require_symmetric_couplings(const ModelParams& p, bool need_zero_gz) {
    p.validate();
    if (!close(p.omega1, p.omega2) || !close(p.gamma_x, p.gamma_y) || !close(p.lambda1, p.lambda2)) {
        raise(ErrorCode::ConditionsViolated, "closed forms need W1 = W2, gx = gy, l1 = l2");
    }
    if (need_zero_gz && p.gamma_z != 0.0) raise(ErrorCode::ConditionsViolated, "closed form needs gamma_z = 0");
}

void require_level(int n, const Truncation& t) {
    if (n < 0 || n > t.n_max) raise(ErrorCode::InvalidParam, "Fock level " + std::to_string(n) + " outside truncation");
}

/// Full-basis vector sum_k c_k |pair_k> (x) boson.
CVector assemble(const std::vector<std::pair<Index, Complex>>& qutrit_part, const CVector& boson, const Truncation& t) {
    const Index nb = t.boson_dim();
    CVector v = CVector::Zero(kPairDim * nb);
    for (const auto& [pair, c] : qutrit_part) v.segment(pair * nb, nb) += c * boson;
    return v;
}

Index pair_of(int m1, int m2) { return qutrit_index(m1) * 3 + qutrit_index(m2); }

CVector fock(int n, const Truncation& t) {
    CVector v = CVector::Zero(t.boson_dim());
    v(n) = 1.0;
    return v;
}

} // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::ThetaMinus: return "Theta0-";
    case Family::PsiMinusMinus: return "Psi0--";
    case Family::PhiMinus: return "Phi0-";
    case Family::PsiPlusMinus: return "Psi0+-";
    case Family::ThetaPlus: return "Theta0+";
    }
    return "?";
}

const std::array<CandidateGS, 5>& ground_candidates() {
    static const std::array<CandidateGS, 5> list{{
        {Family::ThetaMinus, -2, 0.0, 4.0},
        {Family::PsiMinusMinus, -1, 0.5, 1.0},
        {Family::PhiMinus, 0, (1.0 + 2.0 * kSqrt2) / 4.0, 0.0},
        {Family::PsiPlusMinus, 1, 0.5, 1.0},
        {Family::ThetaPlus, 2, 0.0, 4.0},
    }};
    return list;
}

const CandidateGS& candidate(Family f) { return ground_candidates()[static_cast<std::size_t>(f)]; }

double CandidateGS::energy(double Omega, double gamma, double omega_mode, double lambda) const {
    const double polaron = lambda * lambda / omega_mode; // alpha^2 omega
    switch (family) {
    case Family::ThetaMinus: return -2.0 * Omega - 4.0 * polaron;
    case Family::PsiMinusMinus: return -Omega - gamma - polaron;
    case Family::PhiMinus: return -kSqrt2 * gamma;
    case Family::PsiPlusMinus: return Omega - gamma - polaron;
    case Family::ThetaPlus: return 2.0 * Omega - 4.0 * polaron;
    }
    return 0.0;
}

double candidate_energy(Family f, double omega_over_gamma, double x) {
    // gamma = omega = 1 gives lambda^2 = x.
    return candidate(f).energy(omega_over_gamma, 1.0, 1.0, std::sqrt(std::max(x, 0.0)));
}

Family ground_family(double omega_over_gamma, double x) {
    Family best = Family::ThetaMinus;
    double e_best = std::numeric_limits<double>::infinity();
    for (const auto& c : ground_candidates()) {
        const double e = candidate_energy(c.family, omega_over_gamma, x);
        if (e < e_best) {
            e_best = e;
            best = c.family;
        }
    }
    return best;
}

AnalyticState psi_state(int n, PsiBranch branch, const ModelParams& p, const Truncation& t) {
    require_symmetric_couplings(p, false);
    require_level(n, t);
    const double alpha = p.lambda1 / p.omega_mode;
    const bool upper = branch == PsiBranch::PlusPlus || branch == PsiBranch::PlusMinus;
    const double sign = (branch == PsiBranch::PlusPlus || branch == PsiBranch::MinusPlus) ? 1.0 : -1.0;
    const double s = 1.0 / kSqrt2;

    const CVector boson = displacement(upper ? -alpha : alpha, t).mat().col(n);
    std::vector<std::pair<Index, Complex>> q;
    if (upper) {
        q = {{pair_of(1, 0), s}, {pair_of(0, 1), sign * s}};
    } else {
        q = {{pair_of(0, -1), s}, {pair_of(-1, 0), sign * s}};
    }
    const double Omega = p.omega1, gamma = p.gamma_x;
    const double energy = (upper ? Omega : -Omega) + sign * gamma + (n - alpha * alpha) * p.omega_mode;
    return {StateVector::normalized(assemble(q, boson, t)), energy};
}

AnalyticState phi_state(int n, PhiBranch branch, const ModelParams& p, const Truncation& t) {
    require_symmetric_couplings(p, true);
    require_level(n, t);
    const double gamma = p.gamma_x;
    std::vector<std::pair<Index, Complex>> q;
    double energy = n * p.omega_mode;
    switch (branch) {
    case PhiBranch::Plus:
    case PhiBranch::Minus: {
        const double sign = branch == PhiBranch::Plus ? 1.0 : -1.0;
        q = {{pair_of(1, -1), 0.5}, {pair_of(0, 0), sign * kSqrt2 / 2.0}, {pair_of(-1, 1), 0.5}};
        energy += sign * kSqrt2 * gamma;
        break;
    }
    case PhiBranch::Zero:
        q = {{pair_of(1, -1), 1.0 / kSqrt2}, {pair_of(-1, 1), -1.0 / kSqrt2}};
        break;
    }
    return {StateVector::normalized(assemble(q, fock(n, t), t)), energy};
}

AnalyticState theta_state(int n, ThetaBranch branch, const ModelParams& p, const Truncation& t) {
    require_symmetric_couplings(p, true);
    require_level(n, t);
    const double alpha = p.lambda1 / p.omega_mode;
    const bool plus = branch == ThetaBranch::Plus;
    const CVector boson = displacement(plus ? -2.0 * alpha : 2.0 * alpha, t).mat().col(n);
    const Index pair = plus ? pair_of(1, 1) : pair_of(-1, -1);
    const double energy = (plus ? 2.0 : -2.0) * p.omega1 + (n - 4.0 * alpha * alpha) * p.omega_mode;
    return {StateVector::normalized(assemble({{pair, 1.0}}, boson, t)), energy};
}

std::vector<CrossingLine> crossing_lines() {
    return {
        {Family::ThetaMinus, Family::PsiMinusMinus, 1.0, -3.0},
        {Family::ThetaPlus, Family::PsiPlusMinus, -1.0, 3.0},
        {Family::PsiMinusMinus, Family::PhiMinus, kSqrt2 - 1.0, -1.0},
        {Family::PsiPlusMinus, Family::PhiMinus, -(kSqrt2 - 1.0), 1.0},
        {Family::ThetaMinus, Family::PhiMinus, kSqrt2 / 2.0, -2.0},
        {Family::ThetaPlus, Family::PhiMinus, -kSqrt2 / 2.0, 2.0},
        {Family::ThetaMinus, Family::ThetaPlus, 0.0, 0.0},
    };
}

std::vector<TriplePoint> triple_points() {
    const double w = (3.0 * kSqrt2 - 4.0) / 2.0;
    const double x = (2.0 - kSqrt2) / 2.0;
    return {
        {0.0, kSqrt2 / 4.0, {Family::PhiMinus, Family::ThetaPlus, Family::ThetaMinus}},
        {w, x, {Family::ThetaMinus, Family::PsiMinusMinus, Family::PhiMinus}},
        {-w, x, {Family::ThetaPlus, Family::PsiPlusMinus, Family::PhiMinus}},
    };
}

std::vector<BoundaryPoint> phase_boundaries(double x_min, double x_max, int samples) {
    if (samples < 2 || !(x_max > x_min)) raise(ErrorCode::InvalidParam, "phase_boundaries needs x_min < x_max, samples >= 2");
    std::vector<BoundaryPoint> out;
    for (const CrossingLine& line : crossing_lines()) {
        for (int i = 0; i < samples; ++i) {
            const double x = x_min + (x_max - x_min) * i / (samples - 1);
            const double w = line.omega_over_gamma(x);
            const double e = candidate_energy(line.a, w, x);
            bool ground = true;
            for (const auto& c : ground_candidates()) {
                if (c.family == line.a || c.family == line.b) continue;
                if (candidate_energy(c.family, w, x) < e - 1e-12) {
                    ground = false;
                    break;
                }
            }
            if (ground) out.push_back({line.a, line.b, w, x});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// QPT

namespace {

void require_phase(double g, QptPhase phase, bool strict) {
    if (!(g >= 0.0)) raise(ErrorCode::InvalidParam, "g must be >= 0");
    const bool ok = phase == QptPhase::Normal ? (strict ? g < 1.0 : g <= 1.0) : (strict ? g > 1.0 : g >= 1.0);
    if (!ok) {
        raise(ErrorCode::PhaseMismatch, std::string(phase == QptPhase::Normal ? "normal" : "superradiant") +
                                            " phase does not hold at g = " + std::to_string(g));
    }
}

} // namespace

double qpt_ground_energy(const QptParams& q, QptPhase phase) {
    q.validate();
    const double g = q.g();
    require_phase(g, phase, true);
    const double w = q.omega_mode;
    if (phase == QptPhase::Normal) return w * (std::sqrt(1.0 - g * g) - 1.0) / 2.0 - q.gamma / 2.0 - q.Omega;
    const double g2 = g * g;
    return w * (std::sqrt(1.0 - 1.0 / (g2 * g2)) - 1.0) / 2.0 - q.gamma * (g2 + 1.0 / g2) / 4.0 - q.Omega;
}

double squeeze_parameter(double g, QptPhase phase) {
    require_phase(g, phase, true);
    if (phase == QptPhase::Normal) return -std::log(1.0 - g * g) / 4.0;
    return -std::log(1.0 - 1.0 / (g * g * g * g)) / 4.0;
}

AnalyticState qpt_ground(const QptParams& q, QptPhase phase, SpBranch branch, const Truncation& t) {
    q.validate();
    const double g = q.g();
    const double energy = qpt_ground_energy(q, phase);
    const CVector boson = squeeze(squeeze_parameter(g, phase), t).mat().col(0);
    double c1 = 1.0 / kSqrt2, c2 = 1.0 / kSqrt2;
    if (phase == QptPhase::Superradiant) {
        const double u = std::sqrt(1.0 + 1.0 / (g * g));
        const double v = std::sqrt(1.0 - 1.0 / (g * g));
        c1 = branch == SpBranch::Plus ? (u - v) / 2.0 : (u + v) / 2.0;
        c2 = branch == SpBranch::Plus ? (u + v) / 2.0 : (u - v) / 2.0;
    }
    const CVector v = assemble({{pair_of(0, -1), c1}, {pair_of(-1, 0), -c2}}, boson, t);
    return {StateVector::normalized(v), energy};
}

QptObservables qpt_observables(double g, QptPhase phase) {
    require_phase(g, phase, false);
    QptObservables o;
    if (phase == QptPhase::Normal) {
        o.negativity_printed = o.negativity_derived = 0.5;
        return o;
    }
    const double gm2 = 1.0 / (g * g);
    o.n_rescaled = (g * g - gm2) / 4.0;
    o.negativity_printed = gm2 * gm2 / 2.0;
    o.negativity_derived = gm2 / 2.0;
    o.stag_printed = std::sqrt(std::max(0.0, 1.0 - gm2));
    o.stag_derived = -std::sqrt(std::max(0.0, 1.0 - gm2 * gm2));
    return o;
}

RescaledEnergy qpt_rescaled_energy(double g, double omega_mode, double qutrit_ratio) {
    if (!(g >= 0.0)) raise(ErrorCode::InvalidParam, "g must be >= 0");
    RescaledEnergy e;
    if (g <= 1.0) {
        e.derived = -omega_mode / 2.0 - qutrit_ratio * omega_mode;
        e.printed = -omega_mode;
    } else {
        const double s = g * g + 1.0 / (g * g);
        e.derived = -omega_mode * s / 4.0 - qutrit_ratio * omega_mode;
        e.printed = -omega_mode * s / 2.0;
    }
    return e;
}

} // namespace qrabi
