// channel.hpp
// Construction of the two 2N-qubit channels: the product of N Bell pairs on
// positions (i, N+i), and the entangled all-or-nothing channel obtained from
// it by CNOTs with controls 1..N-1 and target 2N.

#pragma once

#include <stdexcept>
#include <vector>

#include "teleportnet/statevector.hpp"

namespace teleportnet {

enum class ChannelKind { Product, Entangled };

inline std::string to_string(ChannelKind k) {
    return k == ChannelKind::Product ? "product" : "entangled";
}

// 3N register qubits at N = 10 is the desk-scale ceiling.
inline constexpr int kMaxSenders = 10;

inline void check_sender_count(int n, int min_n = 1) {
    if (n < min_n) throw std::invalid_argument("sender count too small");
    if (n > kMaxSenders) throw std::invalid_argument("sender count exceeds limit");
}

inline StateVector bell_phi_plus() {
    const double h = 1.0 / std::sqrt(2.0);
    return StateVector(2, {cplx{h, 0}, {0, 0}, {0, 0}, cplx{h, 0}});
}

// Product of N phi+ pairs, pair i on qubits (i, N+i): built as consecutive
// pairs and then interleaved so the amplitude layout matches the paper's
// labeling directly.
inline StateVector build_product_channel(int n) {
    check_sender_count(n);
    StateVector s;
    for (int i = 0; i < n; ++i) s = tensor(s, bell_phi_plus());
    std::vector<int> perm(2 * n);
    for (int i = 1; i <= n; ++i) {
        perm[i - 1] = 2 * i - 1;       // sender half of pair i
        perm[n + i - 1] = 2 * i;       // receiver half of pair i
    }
    return reorder_qubits(s, perm);
}

inline StateVector build_entangled_channel(int n) {
    check_sender_count(n, 2);
    StateVector s = build_product_channel(n);
    for (int c = 1; c <= n - 1; ++c) s = apply_cnot(s, c, 2 * n);
    return s;
}

// Structural check on nonzero-amplitude basis states:
//   Product: bits 1..N equal bits N+1..2N.
//   Entangled: bits 1..N-1 equal bits N+1..2N-1, and bit 2N equals
//   bit N XOR parity(bits 1..N-1).
// All nonzero amplitudes must equal 2^(-N/2).
inline bool verify_channel_structure(const StateVector& s, int n, ChannelKind kind) {
    if (s.num_qubits() != 2 * n)
        throw std::invalid_argument("state does not have 2N qubits");
    const double expected = std::pow(2.0, -n / 2.0);
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        const cplx a = s.amp(idx);
        if (std::abs(a) <= kNormTol) continue;
        if (std::abs(a - cplx{expected, 0}) > kNormTol) return false;
        if (kind == ChannelKind::Product) {
            for (int q = 1; q <= n; ++q)
                if (s.bit(idx, q) != s.bit(idx, n + q)) return false;
        } else {
            int parity = 0;
            for (int q = 1; q <= n - 1; ++q) {
                if (s.bit(idx, q) != s.bit(idx, n + q)) return false;
                parity ^= s.bit(idx, q);
            }
            if (s.bit(idx, 2 * n) != (s.bit(idx, n) ^ parity)) return false;
        }
    }
    return true;
}

inline StateVector build_channel(int n, ChannelKind kind) {
    // N = 1 has no CNOTs to apply; the entangled channel degenerates to the
    // product one.
    if (kind == ChannelKind::Entangled && n >= 2) return build_entangled_channel(n);
    return build_product_channel(n);
}

}  // namespace teleportnet
