#include "qrabi/model.hpp"

#include "qrabi/error.hpp"

#include <cmath>
#include <string>

namespace qrabi {

namespace {

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

void ModelParams::validate() const {
    if (!all_finite({omega1, omega2, gamma_x, gamma_y, gamma_z, omega_mode, lambda1, lambda2})) {
        raise(ErrorCode::InvalidParam, "model parameters must be finite");
    }
    if (!(omega_mode > 0.0)) raise(ErrorCode::InvalidParam, "omega_mode must be > 0");
}

void QptParams::validate() const {
    if (!all_finite({Omega, gamma, lambda, omega_mode})) raise(ErrorCode::InvalidParam, "QPT parameters must be finite");
    if (!(omega_mode > 0.0)) raise(ErrorCode::InvalidParam, "omega_mode must be > 0");
    if (!(gamma > 0.0)) raise(ErrorCode::InvalidParam, "gamma must be > 0 for the QPT preset");
}

QptParams QptParams::from_g(double Omega, double gamma, double omega_mode, double g, GConvention convention) {
    QptParams q{Omega, gamma, 0.0, omega_mode};
    q.validate();
    const double scale = std::sqrt(omega_mode * gamma);
    q.lambda = convention == GConvention::Reconciled ? g * scale : 0.5 * g * scale;
    return q;
}

ModelParams preset_level_crossing(double Omega, double gamma, double lambda, double omega_mode) {
    ModelParams p{Omega, Omega, gamma, gamma, 0.0, omega_mode, lambda, lambda};
    p.validate();
    return p;
}

ModelParams preset_qpt(double Omega, double gamma, double lambda, double omega_mode) {
    QptParams{Omega, gamma, lambda, omega_mode}.validate();
    ModelParams p{Omega, Omega, 0.5 * gamma, 0.5 * gamma, 0.0, omega_mode, 0.5 * lambda, -0.5 * lambda};
    p.validate();
    return p;
}

ModelParams preset_qpt(const QptParams& q) { return preset_qpt(q.Omega, q.gamma, q.lambda, q.omega_mode); }

QMatrix build_full(const ModelParams& p, const Truncation& t) {
    p.validate();
    const auto s = spin1_ops();
    const QMatrix i3 = QMatrix::identity(3);
    const QMatrix ib = QMatrix::identity(t.boson_dim());
    const QMatrix field = field_op(t);

    QMatrix h = p.omega1 * kron3(s.z, i3, ib);
    h += p.omega2 * kron3(i3, s.z, ib);
    h += p.gamma_x * kron3(s.x, s.x, ib);
    h += p.gamma_y * kron3(s.y, s.y, ib);
    h += p.gamma_z * kron3(s.z, s.z, ib);
    h += p.omega_mode * kron3(i3, i3, number_op(t));
    h += p.lambda1 * kron3(s.z, i3, field);
    h += p.lambda2 * kron3(i3, s.z, field);
    return h;
}

QMatrix build_h0_effective(const ModelParams& p, const Truncation& t) {
    p.validate();
    const auto s = pauli_ops();
    const QMatrix i2 = QMatrix::identity(2);
    const QMatrix ib = QMatrix::identity(t.boson_dim());
    const QMatrix field = field_op(t);

    // H_a: qubit a carries the K = -1 "which half" degree of freedom.
    QMatrix h = p.omega_plus() * kron3(s.z, i2, ib);
    h += (0.5 * p.gamma_minus()) * kron3(s.x, i2, ib);
    h += p.lambda_plus() * kron3(s.z, i2, field);
    // H_b
    h += p.omega_minus() * kron3(i2, s.z, ib);
    h += (0.5 * p.gamma_plus()) * kron3(i2, s.x, ib);
    h += p.lambda_minus() * kron3(i2, s.z, field);
    // H_o
    h += p.omega_mode * kron3(i2, i2, number_op(t));
    return h;
}

QMatrix build_h3(const ModelParams& p, const Truncation& t) {
    p.validate();
    if (p.gamma_z != 0.0) raise(ErrorCode::InvalidParam, "build_h3 requires gamma_z = 0");
    if (p.gamma_x != p.gamma_y) raise(ErrorCode::InvalidParam, "build_h3 requires gamma_x = gamma_y");
    const auto s = spin1_ops();
    const QMatrix ib = QMatrix::identity(t.boson_dim());
    const double gamma = p.gamma_x;

    QMatrix h = (std::sqrt(2.0) * gamma) * kron(s.x, ib);
    h += p.omega_mode * kron(QMatrix::identity(3), number_op(t));
    // |1-1> and |-11> carry +-(W1 - W2) and +-(l1 - l2); both vanish on |00>.
    h += (p.omega1 - p.omega2) * kron(s.z, ib);
    h += (p.lambda1 - p.lambda2) * kron(s.z, field_op(t));
    return h;
}

QMatrix build_np_sp_effective(const QptParams& q, const Truncation& t, QptPhase phase) {
    q.validate();
    const double g = q.g();
    const double w = q.omega_mode;
    double c = 0.0, offset = 0.0;
    if (phase == QptPhase::Normal) {
        if (!(g < 1.0)) raise(ErrorCode::PhaseMismatch, "normal-phase Hamiltonian needs g < 1, got " + std::to_string(g));
        c = w * g * g / 4.0;
        offset = -q.gamma / 2.0 - q.Omega;
    } else {
        if (!(g > 1.0)) raise(ErrorCode::PhaseMismatch, "superradiant Hamiltonian needs g > 1, got " + std::to_string(g));
        c = w / (4.0 * g * g * g * g);
        offset = -q.gamma * (g * g + 1.0 / (g * g)) / 4.0 - q.Omega;
    }
    const QMatrix x = field_op(t);
    QMatrix h = w * number_op(t);
    h -= c * QMatrix(x.mat() * x.mat(), true);
    h += offset * QMatrix::identity(t.boson_dim());
    return h;
}

QutritTerms qutrit_terms(const ModelParams& p, double stagger_bias) {
    p.validate();
    const auto s = spin1_ops();
    const QMatrix i3 = QMatrix::identity(3);
    QMatrix c = p.omega1 * kron(s.z, i3);
    c += p.omega2 * kron(i3, s.z);
    c += p.gamma_x * kron(s.x, s.x);
    c += p.gamma_y * kron(s.y, s.y);
    c += p.gamma_z * kron(s.z, s.z);
    if (stagger_bias != 0.0) {
        c += stagger_bias * (kron(s.z, i3) - kron(i3, s.z));
    }
    QMatrix k = p.lambda1 * kron(s.z, i3);
    k += p.lambda2 * kron(i3, s.z);
    return {c.mat(), k.mat()};
}

} // namespace qrabi
