// SPDX-License-Identifier: Apache-2.0

#include "polarcat/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace polarcat {

// ---------------------------------------------------------------------------
// ModeRegister

ModeRegister::ModeRegister(std::initializer_list<Mode> modes) : modes_(modes) {
    validate();
}

ModeRegister::ModeRegister(std::vector<Mode> modes) : modes_(std::move(modes)) {
    validate();
}

void ModeRegister::validate() const {
    std::set<std::string> seen;
    for (const auto& m : modes_) {
        if (m.cutoff < 1)
            throw DimensionMismatch("mode " + m.label + ": cutoff must be >= 1");
        if (!seen.insert(m.label).second)
            throw DimensionMismatch("duplicate mode label: " + m.label);
    }
}

int ModeRegister::position(const std::string& label) const {
    for (int i = 0; i < n_modes(); ++i)
        if (modes_[i].label == label) return i;
    throw UnknownMode(label);
}

bool ModeRegister::contains(const std::string& label) const {
    for (const auto& m : modes_)
        if (m.label == label) return true;
    return false;
}

long ModeRegister::dim() const {
    long d = 1;
    for (const auto& m : modes_) d *= m.dim();
    return d;
}

long ModeRegister::flatten(const std::vector<int>& ns) const {
    if (static_cast<int>(ns.size()) != n_modes())
        throw DimensionMismatch("occupation tuple length mismatch");
    long idx = 0;
    for (int i = 0; i < n_modes(); ++i) {
        if (ns[i] < 0 || ns[i] > modes_[i].cutoff)
            throw DimensionMismatch("occupation out of range on mode " + modes_[i].label);
        idx = idx * modes_[i].dim() + ns[i];
    }
    return idx;
}

std::vector<int> ModeRegister::unflatten(long index) const {
    std::vector<int> ns(n_modes());
    for (int i = n_modes() - 1; i >= 0; --i) {
        ns[i] = static_cast<int>(index % modes_[i].dim());
        index /= modes_[i].dim();
    }
    return ns;
}

bool ModeRegister::operator==(const ModeRegister& other) const {
    if (n_modes() != other.n_modes()) return false;
    for (int i = 0; i < n_modes(); ++i)
        if (modes_[i].label != other.modes_[i].label ||
            modes_[i].cutoff != other.modes_[i].cutoff)
            return false;
    return true;
}

ModeRegister concat(const ModeRegister& a, const ModeRegister& b) {
    std::vector<Mode> ms = a.modes();
    ms.insert(ms.end(), b.modes().begin(), b.modes().end());
    return ModeRegister(std::move(ms));
}

// ---------------------------------------------------------------------------
// FockVector / DensityOperator

FockVector::FockVector(ModeRegister reg, VectorXcd amps)
    : reg_(std::move(reg)), amps_(std::move(amps)) {
    if (amps_.size() != reg_.dim())
        throw DimensionMismatch("amplitude vector does not match register dimension");
}

FockVector FockVector::zero(ModeRegister reg) {
    VectorXcd a = VectorXcd::Zero(reg.dim());
    return FockVector(std::move(reg), std::move(a));
}

FockVector& FockVector::normalize() {
    const double n = amps_.norm();
    if (n <= 0.0) throw ZeroProbability("cannot normalize a zero state");
    amps_ /= n;
    return *this;
}

FockVector FockVector::normalized() const {
    FockVector out = *this;
    out.normalize();
    return out;
}

DensityOperator FockVector::to_density() const {
    return DensityOperator(reg_, amps_ * amps_.adjoint());
}

DensityOperator::DensityOperator(ModeRegister reg, MatrixXcd m)
    : reg_(std::move(reg)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != reg_.dim())
        throw DimensionMismatch("density matrix does not match register dimension");
}

DensityOperator DensityOperator::identity(ModeRegister reg) {
    const long d = reg.dim();
    return DensityOperator(std::move(reg), MatrixXcd::Identity(d, d) / double(d));
}

DensityOperator& DensityOperator::normalize() {
    const double t = trace();
    if (t <= 0.0) throw ZeroProbability("cannot normalize a trace-zero operator");
    m_ /= t;
    return *this;
}

DensityOperator DensityOperator::normalized() const {
    DensityOperator out = *this;
    out.normalize();
    return out;
}

void DensityOperator::validate(bool require_unit_trace) const {
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw DimensionMismatch("density operator not Hermitian: " + std::to_string(herm));
    if (require_unit_trace && std::abs(trace() - 1.0) > 1e-10)
        throw DimensionMismatch("density operator trace != 1: " + std::to_string(trace()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw DimensionMismatch("density operator has eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

// ---------------------------------------------------------------------------
// Constructors

FockVector vacuum(const ModeRegister& reg) {
    FockVector v = FockVector::zero(reg);
    v.amps()(0) = 1.0;
    return v;
}

namespace {

void finish_constructor(VectorXcd& amps, double exact_total, double max_discard,
                        double* discarded) {
    const double kept = amps.squaredNorm();
    const double lost = std::max(0.0, 1.0 - kept / exact_total);
    if (discarded) *discarded = lost;
    if (lost > max_discard) throw CutoffTooSmall(lost, max_discard);
    amps /= amps.norm();
}

}  // namespace

FockVector coherent(cplx gamma, int cutoff, const std::string& label,
                    double max_discard, double* discarded) {
    ModeRegister reg{{label, cutoff}};
    VectorXcd amps(reg.dim());
    // amps_n = e^{-|g|^2/2} g^n / sqrt(n!), built by recurrence
    cplx a = std::exp(-0.5 * std::norm(gamma));
    for (int n = 0; n <= cutoff; ++n) {
        amps(n) = a;
        a *= gamma / std::sqrt(double(n + 1));
    }
    finish_constructor(amps, 1.0, max_discard, discarded);
    return FockVector(std::move(reg), std::move(amps));
}

FockVector squeezed_vacuum(double r, int cutoff, const std::string& label,
                           double max_discard, double* discarded) {
    if (r < 0) throw DimensionMismatch("squeezing parameter must be >= 0");
    if (cutoff < 2) throw DimensionMismatch("squeezed vacuum needs cutoff >= 2");
    ModeRegister reg{{label, cutoff}};
    VectorXcd amps = VectorXcd::Zero(reg.dim());
    // amps_{2n} = sqrt(sech r) (tanh r)^n sqrt((2n)!)/(2^n n!); positive sign
    // so the state approximates the even cat along +x (see header).
    const double t = std::tanh(r);
    double a = std::sqrt(1.0 / std::cosh(r));
    for (int n = 0; 2 * n <= cutoff; ++n) {
        amps(2 * n) = a;
        // ratio amps_{2n+2}/amps_{2n} = t * sqrt((2n+1)(2n+2)) / (2(n+1))
        a *= t * std::sqrt(double(2 * n + 1) * double(2 * n + 2)) / (2.0 * (n + 1));
    }
    finish_constructor(amps, 1.0, max_discard, discarded);
    return FockVector(std::move(reg), std::move(amps));
}

FockVector cat_state(double gamma, CatParity parity, int cutoff,
                     const std::string& label, double max_discard,
                     double* discarded) {
    if (gamma < 0) throw DimensionMismatch("cat amplitude must be >= 0");
    if (parity == CatParity::minus && gamma == 0.0) throw DegenerateCat();
    ModeRegister reg{{label, cutoff}};
    VectorXcd amps = VectorXcd::Zero(reg.dim());
    // even: amps_{2n} ∝ gamma^{2n}/sqrt((2n)!); odd: gamma^{2n+1}/sqrt((2n+1)!)
    const int start = parity == CatParity::plus ? 0 : 1;
    double term = 1.0;  // gamma^n / sqrt(n!) running value
    for (int n = 0; n <= cutoff; ++n) {
        if (n % 2 == start % 2) amps(n) = term;
        term *= gamma / std::sqrt(double(n + 1));
    }
    // untruncated squared norm of gamma^n/sqrt(n!) over one parity class
    const double exact = parity == CatParity::plus ? std::cosh(gamma * gamma)
                                                   : std::sinh(gamma * gamma);
    finish_constructor(amps, exact, max_discard, discarded);
    return FockVector(std::move(reg), std::move(amps));
}

// ---------------------------------------------------------------------------
// Index helpers

namespace {

struct ModeStride {
    int pos;
    long stride;  // distance between consecutive occupations of this mode
    int dim;
};

ModeStride mode_stride(const ModeRegister& reg, const std::string& label) {
    const int pos = reg.position(label);
    long stride = 1;
    for (int i = reg.n_modes() - 1; i > pos; --i) stride *= reg.mode(i).dim();
    return {pos, stride, reg.mode(pos).dim()};
}

// Iterates all flat indices with the named mode fixed at occupation n.
template <typename F>
void for_each_fixed(const ModeRegister& reg, const ModeStride& ms, int n, F&& f) {
    const long block = ms.stride * ms.dim;
    const long total = reg.dim();
    long rest = 0;
    for (long outer = 0; outer < total; outer += block)
        for (long inner = 0; inner < ms.stride; ++inner, ++rest)
            f(outer + n * ms.stride + inner, rest);
}

ModeRegister drop_mode(const ModeRegister& reg, int pos) {
    std::vector<Mode> ms;
    for (int i = 0; i < reg.n_modes(); ++i)
        if (i != pos) ms.push_back(reg.mode(i));
    return ModeRegister(std::move(ms));
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations

FockVector annihilate(const FockVector& state, const std::string& mode) {
    const auto ms = mode_stride(state.reg(), mode);
    FockVector out = FockVector::zero(state.reg());
    const auto& a = state.amps();
    auto& b = out.amps();
    const long block = ms.stride * ms.dim;
    for (long outer = 0; outer < state.dim(); outer += block)
        for (int n = 1; n < ms.dim; ++n)
            for (long inner = 0; inner < ms.stride; ++inner) {
                const long src = outer + n * ms.stride + inner;
                b(src - ms.stride) = std::sqrt(double(n)) * a(src);
            }
    return out;
}

DensityOperator annihilate(const DensityOperator& state, const std::string& mode) {
    // a rho a^dag via the single-mode lowering matrix
    const auto ms = mode_stride(state.reg(), mode);
    MatrixXcd low = MatrixXcd::Zero(ms.dim, ms.dim);
    for (int n = 1; n < ms.dim; ++n) low(n - 1, n) = std::sqrt(double(n));
    return apply_matrix(state, low, {mode});
}

FockVector tensor(const FockVector& a, const FockVector& b) {
    ModeRegister reg = concat(a.reg(), b.reg());
    VectorXcd amps(reg.dim());
    const long db = b.dim();
    for (long i = 0; i < a.dim(); ++i)
        amps.segment(i * db, db) = a.amps()(i) * b.amps();
    return FockVector(std::move(reg), std::move(amps));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    ModeRegister reg = concat(a.reg(), b.reg());
    const long da = a.dim(), db = b.dim();
    MatrixXcd m(da * db, da * db);
    for (long i = 0; i < da; ++i)
        for (long j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return DensityOperator(std::move(reg), std::move(m));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
    const ModeRegister& reg = rho.reg();
    std::vector<int> keep_pos;
    for (const auto& l : keep) keep_pos.push_back(reg.position(l));

    std::vector<Mode> kept_modes;
    for (int p : keep_pos) kept_modes.push_back(reg.mode(p));
    ModeRegister out_reg(kept_modes);

    std::vector<int> traced_pos;
    for (int i = 0; i < reg.n_modes(); ++i)
        if (std::find(keep_pos.begin(), keep_pos.end(), i) == keep_pos.end())
            traced_pos.push_back(i);

    MatrixXcd out = MatrixXcd::Zero(out_reg.dim(), out_reg.dim());
    const long d = reg.dim();
    std::vector<int> ns(reg.n_modes());

    // Precompute, for every flat index, its kept-part index and traced-part index.
    long traced_dim = 1;
    for (int p : traced_pos) traced_dim *= reg.mode(p).dim();
    std::vector<long> kept_of(d), traced_of(d);
    for (long i = 0; i < d; ++i) {
        ns = reg.unflatten(i);
        long k = 0;
        for (int p : keep_pos) k = k * reg.mode(p).dim() + ns[p];
        long t = 0;
        for (int p : traced_pos) t = t * reg.mode(p).dim() + ns[p];
        kept_of[i] = k;
        traced_of[i] = t;
    }
    // Group indices by traced part for the diagonal sum.
    std::vector<std::vector<long>> by_traced(traced_dim);
    for (long i = 0; i < d; ++i) by_traced[traced_of[i]].push_back(i);
    for (const auto& group : by_traced)
        for (long i : group)
            for (long j : group)
                out(kept_of[i], kept_of[j]) += rho.matrix()(i, j);
    return DensityOperator(std::move(out_reg), std::move(out));
}

cplx overlap(const FockVector& a, const FockVector& b) {
    if (!(a.reg() == b.reg()))
        throw DimensionMismatch("overlap between states on different registers");
    return a.amps().dot(b.amps());  // Eigen dot conjugates the left argument
}

namespace {

// Builds the index map for applying an operator on a subset of modes: for each
// flat index, the compound sub-index over `modes` (row-major in given order)
// and the index of its residual class representative.
struct SubspaceMap {
    long sub_dim = 1;
    std::vector<long> sub_of;    // flat index -> subsystem index
    std::vector<long> rest_of;   // flat index -> residual class id
    std::vector<std::vector<long>> flat;  // [rest][sub] -> flat index
};

SubspaceMap subspace_map(const ModeRegister& reg, const std::vector<std::string>& modes) {
    SubspaceMap sm;
    std::vector<int> pos;
    for (const auto& l : modes) pos.push_back(reg.position(l));
    for (int p : pos) sm.sub_dim *= reg.mode(p).dim();

    const long d = reg.dim();
    sm.sub_of.resize(d);
    sm.rest_of.resize(d);
    long rest_dim = 1;
    for (int i = 0; i < reg.n_modes(); ++i)
        if (std::find(pos.begin(), pos.end(), i) == pos.end())
            rest_dim *= reg.mode(i).dim();
    sm.flat.assign(rest_dim, std::vector<long>(sm.sub_dim));

    for (long i = 0; i < d; ++i) {
        auto ns = reg.unflatten(i);
        long s = 0;
        for (int p : pos) s = s * reg.mode(p).dim() + ns[p];
        long r = 0;
        for (int q = 0; q < reg.n_modes(); ++q)
            if (std::find(pos.begin(), pos.end(), q) == pos.end())
                r = r * reg.mode(q).dim() + ns[q];
        sm.sub_of[i] = s;
        sm.rest_of[i] = r;
        sm.flat[r][s] = i;
    }
    return sm;
}

}  // namespace

FockVector apply_matrix(const FockVector& state, const MatrixXcd& op,
                        const std::vector<std::string>& modes) {
    const auto sm = subspace_map(state.reg(), modes);
    if (op.rows() != sm.sub_dim || op.cols() != sm.sub_dim)
        throw DimensionMismatch("operator dimension does not match named modes");
    FockVector out = FockVector::zero(state.reg());
    VectorXcd tmp(sm.sub_dim);
    for (const auto& group : sm.flat) {
        for (long s = 0; s < sm.sub_dim; ++s) tmp(s) = state.amps()(group[s]);
        VectorXcd res = op * tmp;
        for (long s = 0; s < sm.sub_dim; ++s) out.amps()(group[s]) = res(s);
    }
    return out;
}

DensityOperator apply_matrix(const DensityOperator& state, const MatrixXcd& op,
                             const std::vector<std::string>& modes) {
    const auto sm = subspace_map(state.reg(), modes);
    if (op.rows() != sm.sub_dim || op.cols() != sm.sub_dim)
        throw DimensionMismatch("operator dimension does not match named modes");
    // Expand to the full space once; dimensions in scope stay small.
    const long d = state.dim();
    MatrixXcd big = MatrixXcd::Zero(d, d);
    for (const auto& group : sm.flat)
        for (long s = 0; s < sm.sub_dim; ++s)
            for (long t = 0; t < sm.sub_dim; ++t)
                big(group[s], group[t]) = op(s, t);
    return DensityOperator(state.reg(), big * state.matrix() * big.adjoint());
}

FockVector fix_mode(const FockVector& state, const std::string& mode, int n) {
    const auto ms = mode_stride(state.reg(), mode);
    if (n < 0 || n >= ms.dim)
        throw DimensionMismatch("occupation out of range on mode " + mode);
    ModeRegister out_reg = drop_mode(state.reg(), ms.pos);
    FockVector out = FockVector::zero(out_reg);
    for_each_fixed(state.reg(), ms, n,
                   [&](long src, long dst) { out.amps()(dst) = state.amps()(src); });
    return out;
}

namespace {

std::vector<std::string> bra_modes(const std::vector<BraTerm>& bras) {
    if (bras.empty()) throw DimensionMismatch("empty projector");
    std::vector<std::string> modes;
    for (const auto& [label, n] : bras.front().occupations) {
        (void)n;
        modes.push_back(label);
    }
    for (const auto& term : bras)
        if (term.occupations.size() != modes.size())
            throw DimensionMismatch("projector terms name different modes");
    return modes;
}

}  // namespace

FockVector project_modes(const FockVector& state, const std::vector<BraTerm>& bras) {
    const auto modes = bra_modes(bras);
    FockVector acc;
    bool first = true;
    for (const auto& term : bras) {
        FockVector cur = state;
        for (const auto& [label, n] : term.occupations) cur = fix_mode(cur, label, n);
        cur.amps() *= std::conj(term.coeff);
        if (first) {
            acc = std::move(cur);
            first = false;
        } else {
            acc.amps() += cur.amps();
        }
    }
    return acc;
}

DensityOperator project_modes(const DensityOperator& state,
                              const std::vector<BraTerm>& bras) {
    // K rho K^dag, with each bra term contributing one index slice of rho.
    const auto modes = bra_modes(bras);
    const ModeRegister& reg = state.reg();
    std::vector<int> pos;
    for (const auto& l : modes) pos.push_back(reg.position(l));
    std::vector<Mode> rest;
    for (int i = 0; i < reg.n_modes(); ++i)
        if (std::find(pos.begin(), pos.end(), i) == pos.end())
            rest.push_back(reg.mode(i));
    ModeRegister out_reg(rest);
    const long dr = out_reg.dim();

    // Per term: flat indices of the slice, ordered by residual index.
    std::vector<std::vector<long>> slice(bras.size(), std::vector<long>(dr));
    for (size_t t = 0; t < bras.size(); ++t) {
        std::vector<int> ns(reg.n_modes(), 0);
        for (const auto& [label, n] : bras[t].occupations) ns[reg.position(label)] = n;
        for (long r = 0; r < dr; ++r) {
            auto rest_ns = out_reg.unflatten(r);
            int k = 0;
            for (int q = 0; q < reg.n_modes(); ++q)
                if (std::find(pos.begin(), pos.end(), q) == pos.end())
                    ns[q] = rest_ns[k++];
            slice[t][r] = reg.flatten(ns);
        }
    }
    MatrixXcd out = MatrixXcd::Zero(dr, dr);
    for (size_t t = 0; t < bras.size(); ++t)
        for (size_t u = 0; u < bras.size(); ++u) {
            const cplx w = std::conj(bras[t].coeff) * bras[u].coeff;
            for (long r = 0; r < dr; ++r)
                for (long c = 0; c < dr; ++c)
                    out(r, c) += w * state.matrix()(slice[t][r], slice[u][c]);
        }
    return DensityOperator(std::move(out_reg), std::move(out));
}

double mean_photon(const FockVector& state, const std::string& mode) {
    const auto ms = mode_stride(state.reg(), mode);
    double acc = 0.0;
    const long block = ms.stride * ms.dim;
    for (long outer = 0; outer < state.dim(); outer += block)
        for (int n = 1; n < ms.dim; ++n)
            for (long inner = 0; inner < ms.stride; ++inner)
                acc += n * std::norm(state.amps()(outer + n * ms.stride + inner));
    return acc;
}

double mean_photon(const DensityOperator& state, const std::string& mode) {
    const auto ms = mode_stride(state.reg(), mode);
    double acc = 0.0;
    const long block = ms.stride * ms.dim;
    for (long outer = 0; outer < state.dim(); outer += block)
        for (int n = 1; n < ms.dim; ++n)
            for (long inner = 0; inner < ms.stride; ++inner) {
                const long i = outer + n * ms.stride + inner;
                acc += n * state.matrix()(i, i).real();
            }
    return acc;
}

FockVector truncate_mode(const FockVector& state, const std::string& mode,
                         int new_cutoff, double max_discard, double* discarded) {
    const auto ms = mode_stride(state.reg(), mode);
    if (new_cutoff + 1 > ms.dim)
        throw DimensionMismatch("truncate_mode cannot raise a cutoff");
    std::vector<Mode> modes = state.reg().modes();
    modes[ms.pos].cutoff = new_cutoff;
    ModeRegister out_reg(std::move(modes));
    FockVector out = FockVector::zero(out_reg);
    const auto out_ms = mode_stride(out_reg, mode);
    for (int n = 0; n <= new_cutoff; ++n) {
        std::vector<long> srcs, dsts;
        for_each_fixed(state.reg(), ms, n, [&](long s, long) { srcs.push_back(s); });
        for_each_fixed(out_reg, out_ms, n, [&](long s, long) { dsts.push_back(s); });
        for (size_t k = 0; k < srcs.size(); ++k)
            out.amps()(dsts[k]) = state.amps()(srcs[k]);
    }
    const double before = state.squared_norm();
    const double kept = out.squared_norm();
    const double lost = std::max(0.0, 1.0 - kept / before);
    if (discarded) *discarded = lost;
    if (lost > max_discard) throw CutoffTooSmall(lost, max_discard);
    out.amps() /= out.norm();
    return out;
}

}  // namespace polarcat
