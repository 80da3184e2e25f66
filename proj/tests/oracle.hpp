// Test-only brute-force oracle, independent of the library's sparse-state
// machinery. States live over an explicit ordered mode list; basis terms are
// occupation vectors. Mode maps are applied by expanding every basis term
// into an explicit photon list and distributing each photon over the matrix
// columns, which is a different route than the library's polynomial
// substitution.
#ifndef QMEM_TESTS_ORACLE_HPP
#define QMEM_TESTS_ORACLE_HPP

#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Basis = std::vector<int>;                 // occupation per mode index
using State = std::map<Basis, Complex>;
using Matrix = std::vector<std::vector<Complex>>;  // [input][output]

inline double fact(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline State vacuum(std::size_t n_modes) {
    return {{Basis(n_modes, 0), Complex(1.0)}};
}

inline State create(const State& state, std::size_t mode) {
    State out;
    for (const auto& [basis, amp] : state) {
        Basis raised = basis;
        raised[mode] += 1;
        out[raised] += amp * std::sqrt(double(raised[mode]));
    }
    return out;
}

inline Complex dot(const State& a, const State& b) {
    Complex total(0.0);
    for (const auto& [basis, amp] : a) {
        auto it = b.find(basis);
        if (it != b.end()) total += std::conj(amp) * it->second;
    }
    return total;
}

inline double norm2(const State& s) { return dot(s, s).real(); }

// Applies the mode matrix by distributing each photon of each basis term
// independently over the output modes.
inline State apply_matrix(const State& state, const Matrix& u) {
    State out;
    for (const auto& [basis, amp] : state) {
        std::vector<std::size_t> photons;
        for (std::size_t m = 0; m < basis.size(); ++m)
            for (int k = 0; k < basis[m]; ++k) photons.push_back(m);

        double in_norm = 1.0;
        for (int n : basis) in_norm *= fact(n);

        // Iterate over all assignments of each photon to an output mode.
        std::vector<std::size_t> assign(photons.size(), 0);
        const std::size_t n_out = u.empty() ? basis.size() : u[0].size();
        while (true) {
            Complex coeff = amp / std::sqrt(in_norm);
            Basis target(n_out, 0);
            for (std::size_t i = 0; i < photons.size(); ++i) {
                coeff *= u[photons[i]][assign[i]];
                target[assign[i]] += 1;
            }
            if (coeff != Complex(0.0)) {
                double out_norm = 1.0;
                for (int n : target) out_norm *= fact(n);
                out[target] += coeff * std::sqrt(out_norm);
            }
            // Odometer increment.
            std::size_t i = 0;
            for (; i < assign.size(); ++i) {
                if (++assign[i] < n_out) break;
                assign[i] = 0;
            }
            if (i == assign.size()) break;
        }
    }
    // Drop numerically dead terms.
    for (auto it = out.begin(); it != out.end();) {
        if (std::abs(it->second) < 1e-14)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace oracle

#endif  // QMEM_TESTS_ORACLE_HPP
