#include "qrabi/symmetry.hpp"

#include "qrabi/error.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace qrabi {

SectorLabel SectorLabel::k(int value) {
    if (value != 1 && value != -1) raise(ErrorCode::UnknownLabel, "K label must be +1 or -1");
    return {Kind::K, value};
}

SectorLabel SectorLabel::m(int value) {
    if (value < -2 || value > 2) raise(ErrorCode::UnknownLabel, "m label must lie in -2..2");
    return {Kind::M, value};
}

SectorLabel SectorLabel::parse(std::string_view text) {
    if (text == "full") return full();
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq + 1 >= text.size()) {
        raise(ErrorCode::UnknownLabel, "cannot parse sector label '" + std::string(text) + "'");
    }
    const std::string_view key = text.substr(0, eq);
    std::string_view num = text.substr(eq + 1);
    if (num.front() == '+') num.remove_prefix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
        raise(ErrorCode::UnknownLabel, "cannot parse sector label '" + std::string(text) + "'");
    }
    if (key == "K") return k(value);
    if (key == "m") return m(value);
    raise(ErrorCode::UnknownLabel, "unknown sector key in '" + std::string(text) + "'");
}

std::string SectorLabel::to_string() const {
    switch (kind) {
    case Kind::Full: return "full";
    case Kind::K: return value > 0 ? "K=+1" : "K=-1";
    case Kind::M: return value > 0 ? "m=+" + std::to_string(value) : "m=" + std::to_string(value);
    }
    return "?";
}

bool SectorLabel::contains(int m_total) const {
    switch (kind) {
    case Kind::Full: return true;
    case Kind::K: return (m_total % 2 == 0 ? 1 : -1) == value;
    case Kind::M: return m_total == value;
    }
    return false;
}

QMatrix sigma_tot_z(const Truncation& t) {
    const auto s = spin1_ops();
    const QMatrix i3 = QMatrix::identity(3);
    const QMatrix ib = QMatrix::identity(t.boson_dim());
    return kron3(s.z, i3, ib) + kron3(i3, s.z, ib);
}

QMatrix k_operator(const Truncation& t) {
    const QMatrix sz = sigma_tot_z(t);
    CMatrix k = CMatrix::Zero(sz.dim(), sz.dim());
    for (Index i = 0; i < sz.dim(); ++i) {
        const int m = static_cast<int>(std::lround(sz(i, i).real()));
        k(i, i) = (m % 2 == 0) ? 1.0 : -1.0;
    }
    return QMatrix(std::move(k), true);
}

SectorBasis sector_basis(SectorLabel label, const Truncation& t) {
    // Re-validate through the factories so hand-built labels are checked too.
    if (label.kind == SectorLabel::Kind::K) label = SectorLabel::k(label.value);
    if (label.kind == SectorLabel::Kind::M) label = SectorLabel::m(label.value);

    SectorBasis s;
    s.label = label;
    s.n_max = t.n_max;
    const Index nb = t.boson_dim();
    for (int pair = 0; pair < kPairDim; ++pair) {
        const int m1 = qutrit_m(pair / 3);
        const int m2 = qutrit_m(pair % 3);
        if (!label.contains(m1 + m2)) continue;
        s.pairs.push_back(pair);
        s.qutrit_states.emplace_back(m1, m2);
        for (Index n = 0; n < nb; ++n) s.indices.push_back(pair * nb + n);
    }
    return s;
}

SectorBasis sector_basis(SectorLabel label, const Truncation& t, const ModelParams& p) {
    if (label.kind == SectorLabel::Kind::M && std::abs(p.gamma_x - p.gamma_y) > 1e-14) {
        raise(ErrorCode::SymmetryBroken,
              "Sigma_tot^z sectors requested but gamma_x - gamma_y = " + std::to_string(p.gamma_x - p.gamma_y));
    }
    return sector_basis(label, t);
}

std::vector<SectorBasis> m_sectors(const Truncation& t) {
    std::vector<SectorBasis> out;
    for (int m = -2; m <= 2; ++m) out.push_back(sector_basis(SectorLabel::m(m), t));
    return out;
}

std::vector<SectorBasis> k_sectors(const Truncation& t) {
    return {sector_basis(SectorLabel::k(-1), t), sector_basis(SectorLabel::k(1), t)};
}

std::vector<SectorBasis> finest_partition(const ModelParams& p, const Truncation& t) {
    return std::abs(p.gamma_x - p.gamma_y) <= 1e-14 ? m_sectors(t) : k_sectors(t);
}

QMatrix project(const QMatrix& h, const SectorBasis& s) {
    if (h.dim() != kPairDim * s.boson_dim()) {
        raise(ErrorCode::DimMismatch, "project: operator dimension " + std::to_string(h.dim()) +
                                          " does not match 9 (n_max + 1) = " + std::to_string(kPairDim * s.boson_dim()));
    }
    const Index d = s.size();
    CMatrix out(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) out(i, j) = h(s.indices[i], s.indices[j]);
    return QMatrix(std::move(out), h.hermitian_hint());
}

CVector embed(const CVector& v, const SectorBasis& s) {
    if (v.size() != s.size()) raise(ErrorCode::DimMismatch, "embed: vector size does not match sector");
    CVector out = CVector::Zero(kPairDim * s.boson_dim());
    for (Index i = 0; i < s.size(); ++i) out(s.indices[i]) = v(i);
    return out;
}

CVector restrict_to(const CVector& v, const SectorBasis& s) {
    if (v.size() != kPairDim * s.boson_dim()) raise(ErrorCode::DimMismatch, "restrict_to: vector is not full-basis");
    CVector out(s.size());
    for (Index i = 0; i < s.size(); ++i) out(i) = v(s.indices[i]);
    return out;
}

double commutator_norm(const QMatrix& a, const QMatrix& b) {
    if (a.dim() != b.dim()) raise(ErrorCode::DimMismatch, "commutator_norm of different dimensions");
    const double na = a.frobenius_norm(), nb = b.frobenius_norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return commutator(a, b).frobenius_norm() / (na * nb);
}

namespace {

CMatrix slice(const CMatrix& pairs9, const SectorBasis& s) {
    const Index np = s.num_pairs();
    CMatrix out(np, np);
    for (Index i = 0; i < np; ++i)
        for (Index j = 0; j < np; ++j) out(i, j) = pairs9(s.pairs[i], s.pairs[j]);
    return out;
}

void check_truncation(const Truncation& t, const SectorBasis& s) {
    if (t.n_max != s.n_max) raise(ErrorCode::DimMismatch, "sector basis built for a different truncation");
}

} // namespace

QMatrix build_sector_block(const ModelParams& p, const Truncation& t, const SectorBasis& s, double stagger_bias) {
    check_truncation(t, s);
    const QutritTerms terms = qutrit_terms(p, stagger_bias);
    const QMatrix c(slice(terms.constant, s), true);
    const QMatrix k(slice(terms.coupling, s), true);
    const Index np = s.num_pairs();
    QMatrix h = kron(c, QMatrix::identity(t.boson_dim()));
    h += p.omega_mode * kron(QMatrix::identity(np), number_op(t));
    h += kron(k, field_op(t));
    return h;
}

BandedSymmetric build_sector_banded(const ModelParams& p, const Truncation& t, const SectorBasis& s,
                                    double stagger_bias) {
    check_truncation(t, s);
    const QutritTerms terms = qutrit_terms(p, stagger_bias);
    const CMatrix c = slice(terms.constant, s);
    const CMatrix k = slice(terms.coupling, s);
    if (c.imag().cwiseAbs().maxCoeff() > 1e-15 * (1.0 + c.cwiseAbs().maxCoeff()) ||
        k.imag().cwiseAbs().maxCoeff() > 1e-15 * (1.0 + k.cwiseAbs().maxCoeff())) {
        raise(ErrorCode::InvalidParam, "band storage needs a real sector block");
    }
    const RMatrix cr = c.real(), kr = k.real();
    const Index np = s.num_pairs();
    const Index nb = t.boson_dim();

    int kd = 0;
    for (Index i = 0; i < np; ++i) {
        for (Index j = 0; j < np; ++j) {
            if (cr(i, j) != 0.0) kd = std::max<int>(kd, static_cast<int>(std::abs(i - j)));
            if (kr(i, j) != 0.0) kd = std::max<int>(kd, static_cast<int>(np + std::abs(i - j)));
        }
    }

    BandedSymmetric b;
    b.n = np * nb;
    b.kd = kd;
    b.lower = RMatrix::Zero(kd + 1, b.n);
    b.order.resize(static_cast<std::size_t>(b.n));
    // Fock-major band index: n * np + q  <->  sector index q * nb + n.
    for (Index n = 0; n < nb; ++n) {
        for (Index q = 0; q < np; ++q) {
            const Index col = n * np + q;
            b.order[static_cast<std::size_t>(col)] = q * nb + n;
            for (Index q2 = q; q2 < np; ++q2) {
                double v = cr(q2, q);
                if (q2 == q) v += p.omega_mode * static_cast<double>(n);
                if (v != 0.0) b.lower(q2 - q, col) = v;
            }
            if (n + 1 < nb) {
                const double amp = std::sqrt(static_cast<double>(n + 1));
                for (Index q2 = 0; q2 < np; ++q2) {
                    if (kr(q2, q) == 0.0) continue;
                    const Index row = (n + 1) * np + q2;
                    b.lower(row - col, col) = kr(q2, q) * amp;
                }
            }
        }
    }
    return b;
}

} // namespace qrabi
