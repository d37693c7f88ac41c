// statevector.hpp
// Dense state-vector engine: basis states, tensor products, single/two-qubit
// gates, Bell-basis projection with register shrinking, partial trace and
// phase-insensitive fidelity.
//
// Qubit indexing convention: qubits are 1-based and qubit 1 is the most
// significant bit of the basis index, so the ket |b1 b2 ... bn> maps to the
// amplitude at index sum_i b_i * 2^(n-i). This makes amplitude arrays read
// left-to-right like the kets they represent.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace teleportnet {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kZeroProbability = 1e-14;

class StateVector {
public:
    // 0-qubit scalar state (amplitude 1); identity of the tensor product.
    StateVector() : num_qubits_(0), amps_(1, cplx{1.0, 0.0}) {}

    StateVector(int num_qubits, std::vector<cplx> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {
        if (num_qubits < 0)
            throw std::invalid_argument("negative qubit count");
        if (amps_.size() != (std::size_t{1} << num_qubits))
            throw std::invalid_argument("amplitude array size is not 2^n");
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amps() const { return amps_; }
    cplx amp(std::size_t index) const { return amps_.at(index); }

    double norm_squared() const {
        double s = 0.0;
        for (const cplx& a : amps_) s += std::norm(a);
        return s;
    }

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    // Bit of qubit q (1-based, MSB-first) within basis index.
    int bit(std::size_t index, int q) const {
        return static_cast<int>((index >> (num_qubits_ - q)) & 1u);
    }

    std::vector<cplx>& mutable_amps() { return amps_; }

private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

struct Gate1Q {
    cplx m00, m01, m10, m11;

    bool is_unitary(double tol = kNormTol) const {
        // U†U = I entrywise
        const cplx a = std::conj(m00) * m00 + std::conj(m10) * m10;
        const cplx b = std::conj(m00) * m01 + std::conj(m10) * m11;
        const cplx c = std::conj(m01) * m00 + std::conj(m11) * m10;
        const cplx d = std::conj(m01) * m01 + std::conj(m11) * m11;
        return std::abs(a - 1.0) <= tol && std::abs(b) <= tol &&
               std::abs(c) <= tol && std::abs(d - 1.0) <= tol;
    }

    Gate1Q dagger() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }
};

namespace gates {
inline Gate1Q identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
inline Gate1Q pauli_x() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
inline Gate1Q pauli_y() { return {{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
inline Gate1Q pauli_z() { return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }
inline Gate1Q hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return {{h, 0}, {h, 0}, {h, 0}, {-h, 0}};
}
}  // namespace gates

enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr BellOutcome kAllBellOutcomes[4] = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus,
    BellOutcome::PsiPlus, BellOutcome::PsiMinus};

inline std::string to_string(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus:  return "phi+";
        case BellOutcome::PhiMinus: return "phi-";
        case BellOutcome::PsiPlus:  return "psi+";
        case BellOutcome::PsiMinus: return "psi-";
    }
    return "?";
}

// Amplitude of |ba bb> in the (unnormalized-by-1/sqrt2) Bell vector.
inline cplx bell_coefficient(BellOutcome o, int ba, int bb) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (o) {
        case BellOutcome::PhiPlus:
            return (ba == bb) ? cplx{h, 0} : cplx{0, 0};
        case BellOutcome::PhiMinus:
            if (ba != bb) return {0, 0};
            return ba == 0 ? cplx{h, 0} : cplx{-h, 0};
        case BellOutcome::PsiPlus:
            return (ba != bb) ? cplx{h, 0} : cplx{0, 0};
        case BellOutcome::PsiMinus:
            if (ba == bb) return {0, 0};
            return ba == 0 ? cplx{h, 0} : cplx{-h, 0};
    }
    return {0, 0};
}

struct DensityMatrix {
    int num_qubits = 0;
    std::vector<cplx> entries;  // row-major, 2^k x 2^k

    std::size_t dim() const { return std::size_t{1} << num_qubits; }
    cplx at(std::size_t r, std::size_t c) const { return entries[r * dim() + c]; }
    cplx& at(std::size_t r, std::size_t c) { return entries[r * dim() + c]; }

    double trace_real() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += at(i, i).real();
        return t;
    }

    // Tr(rho^2); 1 for pure states.
    double purity() const {
        double p = 0.0;
        const std::size_t d = dim();
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                p += std::real(at(r, c) * at(c, r));
        return p;
    }

    bool is_hermitian(double tol = kNormTol) const {
        const std::size_t d = dim();
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
        return true;
    }
};

inline StateVector make_basis_state(int n, const std::vector<int>& bits) {
    if (n < 0) throw std::invalid_argument("negative qubit count");
    if (bits.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("bit-list length does not match qubit count");
    std::size_t index = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
        index = (index << 1) | static_cast<std::size_t>(b);
    }
    std::vector<cplx> amps(std::size_t{1} << n, cplx{0, 0});
    amps[index] = {1, 0};
    return StateVector(n, std::move(amps));
}

// a's qubits become the most significant block of the result.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a.amp(i) * b.amp(j);
    return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

// Output qubit i carries input qubit perm[i-1]: the amplitude of
// |b_perm(1) ... b_perm(n)> in the result equals the amplitude of
// |b_1 ... b_n> in the input.
inline StateVector reorder_qubits(const StateVector& s, const std::vector<int>& perm) {
    const int n = s.num_qubits();
    if (perm.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("permutation length mismatch");
    std::vector<bool> seen(n + 1, false);
    for (int p : perm) {
        if (p < 1 || p > n || seen[p])
            throw std::invalid_argument("not a permutation of 1..n");
        seen[p] = true;
    }
    std::vector<cplx> out(s.dim());
    for (std::size_t in = 0; in < s.dim(); ++in) {
        std::size_t idx = 0;
        for (int i = 1; i <= n; ++i)
            idx = (idx << 1) | static_cast<std::size_t>(s.bit(in, perm[i - 1]));
        out[idx] = s.amp(in);
    }
    return StateVector(n, std::move(out));
}

inline StateVector apply_1q(const StateVector& s, int q, const Gate1Q& g) {
    const int n = s.num_qubits();
    if (q < 1 || q > n) throw std::invalid_argument("qubit index out of range");
    if (!g.is_unitary()) throw std::invalid_argument("gate is not unitary");
    const std::size_t stride = std::size_t{1} << (n - q);
    std::vector<cplx> out(s.amps());
    for (std::size_t base = 0; base < s.dim(); ++base) {
        if (base & stride) continue;  // visit each |..0..>/|..1..> pair once
        const cplx a0 = s.amp(base);
        const cplx a1 = s.amp(base | stride);
        out[base] = g.m00 * a0 + g.m01 * a1;
        out[base | stride] = g.m10 * a0 + g.m11 * a1;
    }
    return StateVector(n, std::move(out));
}

inline StateVector apply_cnot(const StateVector& s, int control, int target) {
    const int n = s.num_qubits();
    if (control == target) throw std::invalid_argument("control equals target");
    if (control < 1 || control > n || target < 1 || target > n)
        throw std::invalid_argument("qubit index out of range");
    const std::size_t cmask = std::size_t{1} << (n - control);
    const std::size_t tmask = std::size_t{1} << (n - target);
    std::vector<cplx> out(s.amps());
    for (std::size_t i = 0; i < s.dim(); ++i)
        if ((i & cmask) && !(i & tmask)) std::swap(out[i], out[i | tmask]);
    return StateVector(n, std::move(out));
}

struct BellProjection {
    double probability = 0.0;
    std::optional<StateVector> collapsed;  // absent when probability ~ 0
};

// Projects qubits (qa, qb) onto the given Bell vector and removes them from
// the register; remaining qubits keep their relative order.
inline BellProjection bell_project(const StateVector& s, int qa, int qb,
                                   BellOutcome outcome) {
    const int n = s.num_qubits();
    if (qa == qb) throw std::invalid_argument("projection qubits must differ");
    if (qa < 1 || qa > n || qb < 1 || qb > n)
        throw std::invalid_argument("qubit index out of range");

    const int m = n - 2;
    // Shifts (from MSB side) of the surviving qubits, in register order.
    std::vector<int> kept;
    kept.reserve(m);
    for (int q = 1; q <= n; ++q)
        if (q != qa && q != qb) kept.push_back(n - q);
    const std::size_t amask = std::size_t{1} << (n - qa);
    const std::size_t bmask = std::size_t{1} << (n - qb);

    std::vector<cplx> out(std::size_t{1} << m);
    double prob = 0.0;
    for (std::size_t rest = 0; rest < out.size(); ++rest) {
        std::size_t base = 0;
        for (int i = 0; i < m; ++i)
            if ((rest >> (m - 1 - i)) & 1u) base |= std::size_t{1} << kept[i];
        cplx acc{0, 0};
        for (int ba = 0; ba < 2; ++ba)
            for (int bb = 0; bb < 2; ++bb) {
                const cplx c = bell_coefficient(outcome, ba, bb);
                if (c == cplx{0, 0}) continue;
                std::size_t idx = base;
                if (ba) idx |= amask;
                if (bb) idx |= bmask;
                acc += std::conj(c) * s.amp(idx);
            }
        out[rest] = acc;
        prob += std::norm(acc);
    }

    BellProjection result;
    result.probability = prob;
    if (prob >= kZeroProbability) {
        const double scale = 1.0 / std::sqrt(prob);
        for (cplx& a : out) a *= scale;
        result.collapsed = StateVector(m, std::move(out));
    }
    return result;
}

// Partial trace over the complement of `keep` (1-based qubit indices; the
// order of `keep` fixes the qubit order of the reduced state).
inline DensityMatrix reduced_density(const StateVector& s, const std::vector<int>& keep) {
    const int n = s.num_qubits();
    if (keep.empty()) throw std::invalid_argument("keep set is empty");
    std::vector<bool> used(n + 1, false);
    for (int q : keep) {
        if (q < 1 || q > n) throw std::invalid_argument("qubit index out of range");
        if (used[q]) throw std::invalid_argument("duplicate qubit in keep set");
        used[q] = true;
    }
    const int k = static_cast<int>(keep.size());
    std::vector<int> traced;
    for (int q = 1; q <= n; ++q)
        if (!used[q]) traced.push_back(n - q);  // shifts of traced qubits
    std::vector<int> kept_shift;
    for (int q : keep) kept_shift.push_back(n - q);

    const std::size_t dk = std::size_t{1} << k;
    const std::size_t dt = std::size_t{1} << traced.size();
    DensityMatrix rho;
    rho.num_qubits = k;
    rho.entries.assign(dk * dk, cplx{0, 0});

    auto expand = [&](std::size_t sub, const std::vector<int>& shifts) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < shifts.size(); ++i)
            if ((sub >> (shifts.size() - 1 - i)) & 1u)
                idx |= std::size_t{1} << shifts[i];
        return idx;
    };

    for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t tbits = expand(t, traced);
        for (std::size_t r = 0; r < dk; ++r) {
            const cplx ar = s.amp(tbits | expand(r, kept_shift));
            if (ar == cplx{0, 0}) continue;
            for (std::size_t c = 0; c < dk; ++c)
                rho.at(r, c) += ar * std::conj(s.amp(tbits | expand(c, kept_shift)));
        }
    }
    return rho;
}

inline double fidelity_mod_phase(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("register size mismatch");
    cplx overlap{0, 0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        overlap += std::conj(a.amp(i)) * b.amp(i);
    return std::norm(overlap);
}

// <psi| rho |psi>, the fidelity of a mixed state against a pure target.
inline double fidelity_with_pure(const DensityMatrix& rho, const StateVector& psi) {
    if (rho.num_qubits != psi.num_qubits())
        throw std::invalid_argument("register size mismatch");
    cplx f{0, 0};
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            f += std::conj(psi.amp(r)) * rho.at(r, c) * psi.amp(c);
    return f.real();
}

}  // namespace teleportnet
