#include "dqap/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace dqap {

namespace {

// apply c_x then c^dag_y; returns 0 sign if annihilated
struct Hop {
    std::uint32_t mask;
    int sign;
};

int parity_below(std::uint32_t mask, int x) {
    return std::popcount(mask & ((1u << x) - 1u)) & 1;
}

Hop annihilate(std::uint32_t mask, int x) {
    if (!(mask & (1u << x))) return {0, 0};
    return {mask ^ (1u << x), parity_below(mask, x) ? -1 : 1};
}

Hop create(std::uint32_t mask, int x) {
    if (mask & (1u << x)) return {0, 0};
    return {mask | (1u << x), parity_below(mask, x) ? -1 : 1};
}

// c^dag_x c_xp |mask>
Hop hop(std::uint32_t mask, int x, int xp) {
    Hop a = annihilate(mask, xp);
    if (!a.sign) return a;
    Hop c = create(a.mask, x);
    return {c.mask, a.sign * c.sign};
}

void require_basis(const FockVector &a, const FockVector &b) {
    if (a.basis->L != b.basis->L || a.basis->N != b.basis->N)
        throw DimensionMismatch("Fock vectors live in different sectors");
}

std::uint64_t binomial(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::shared_ptr<const FockBasis> FockBasis::make(int L, int N, std::size_t cap) {
    if (L < 1 || L > 14 || N < 0 || N > L)
        throw SizeLimitExceeded("Fock oracle supports 1 <= L <= 14 only");
    if (binomial(L, N) > cap)
        throw SizeLimitExceeded("Fock dimension C(" + std::to_string(L) + "," + std::to_string(N) +
                                ") exceeds cap " + std::to_string(cap));
    auto b = std::make_shared<FockBasis>();
    b->L = L;
    b->N = N;
    b->index.assign(std::size_t{1} << L, -1);
    for (std::uint32_t m = 0; m < (1u << L); ++m)
        if (std::popcount(m) == N) {
            b->index[m] = static_cast<int>(b->masks.size());
            b->masks.push_back(m);
        }
    return b;
}

FockVector slater_to_fock(const SlaterState &state, std::size_t cap) {
    FockVector v;
    v.basis = FockBasis::make(state.L(), state.N(), cap);
    const int N = state.N();
    v.amp.resize(v.basis->size());
    CMatrix sub(N, N);
    const double scale = std::exp(state.log_scale);
    for (std::size_t i = 0; i < v.basis->size(); ++i) {
        const std::uint32_t m = v.basis->masks[i];
        int r = 0;
        for (int x = 0; x < state.L(); ++x)
            if (m & (1u << x)) sub.row(r++) = state.orbitals.row(x);
        v.amp(i) = (N == 0 ? cplx(1.0) : sub.determinant()) * scale;
    }
    return v;
}

CMatrix fock_hamiltonian_matrix(const FockBasis &basis, const CMatrix &h) {
    if (h.rows() != basis.L || h.cols() != basis.L)
        throw DimensionMismatch("hopping matrix does not match the Fock basis");
    const std::size_t D = basis.size();
    CMatrix H = CMatrix::Zero(D, D);
    for (std::size_t j = 0; j < D; ++j) {
        const std::uint32_t m = basis.masks[j];
        for (int x = 0; x < basis.L; ++x)
            for (int xp = 0; xp < basis.L; ++xp) {
                if (h(x, xp) == cplx(0.0)) continue;
                const Hop r = hop(m, x, xp);
                if (r.sign) H(basis.index[r.mask], j) += static_cast<double>(r.sign) * h(x, xp);
            }
    }
    return H;
}

FockVector fock_apply_hamiltonian(const FockVector &vec, const CMatrix &h) {
    return {vec.basis, fock_hamiltonian_matrix(*vec.basis, h) * vec.amp};
}

FockVector fock_evolve(const FockVector &vec, const CMatrix &h, cplx z) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(fock_hamiltonian_matrix(*vec.basis, h));
    if (es.info() != Eigen::Success) throw Error("many-body eigensolver failed");
    CVector w(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-z * es.eigenvalues()(i));
    const CMatrix &V = es.eigenvectors();
    return {vec.basis, V * (w.asDiagonal() * (V.adjoint() * vec.amp))};
}

cplx fock_inner(const FockVector &bra, const FockVector &ket) {
    require_basis(bra, ket);
    return bra.amp.dot(ket.amp);
}

cplx fock_one_body(const FockVector &bra, const FockVector &ket, int x, int xp) {
    require_basis(bra, ket);
    const FockBasis &b = *ket.basis;
    cplx s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        const Hop r = hop(b.masks[j], x, xp);
        if (r.sign) s += std::conj(bra.amp(b.index[r.mask])) * (static_cast<double>(r.sign) * ket.amp(j));
    }
    return s;
}

cplx fock_two_body(const FockVector &bra, const FockVector &ket, int x, int y, int yp, int xp) {
    require_basis(bra, ket);
    const FockBasis &b = *ket.basis;
    cplx s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        // rightmost operator acts first: c_x', c_y', c^dag_y, c^dag_x
        Hop r = annihilate(b.masks[j], xp);
        if (!r.sign) continue;
        int sign = r.sign;
        r = annihilate(r.mask, yp);
        if (!r.sign) continue;
        sign *= r.sign;
        r = create(r.mask, y);
        if (!r.sign) continue;
        sign *= r.sign;
        r = create(r.mask, x);
        if (!r.sign) continue;
        sign *= r.sign;
        s += std::conj(bra.amp(b.index[r.mask])) * (static_cast<double>(sign) * ket.amp(j));
    }
    return s;
}

CMatrix fock_reduced_dm(const FockVector &vec, const Subsystem &A) {
    const FockBasis &b = *vec.basis;
    validate_subsystem(A, b.L);
    if (A.size() > 8) throw SizeLimitExceeded("reduced density matrix limited to L_A <= 8");
    std::vector<int> sites = A;
    std::sort(sites.begin(), sites.end());
    std::uint32_t amask = 0;
    for (int x : sites) amask |= 1u << x;
    const int la = static_cast<int>(sites.size());

    // Reorder each basis state as (A operators)(B operators); the sign counts
    // occupied B sites preceding each occupied A site.
    struct Entry {
        int local;
        std::uint32_t rest;
        double sign;
        cplx amp;
    };
    std::vector<Entry> entries;
    entries.reserve(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        const std::uint32_t m = b.masks[j];
        int local = 0, swaps = 0;
        for (int i = 0; i < la; ++i)
            if (m & (1u << sites[i])) {
                local |= 1 << i;
                swaps += std::popcount(m & ~amask & ((1u << sites[i]) - 1u));
            }
        entries.push_back({local, m & ~amask, (swaps & 1) ? -1.0 : 1.0, vec.amp(j)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry &p, const Entry &q) { return p.rest < q.rest; });
    const int dim = 1 << la;
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (std::size_t s = 0; s < entries.size();) {
        std::size_t e = s;
        while (e < entries.size() && entries[e].rest == entries[s].rest) ++e;
        for (std::size_t p = s; p < e; ++p)
            for (std::size_t q = s; q < e; ++q)
                rho(entries[p].local, entries[q].local) +=
                    entries[p].sign * entries[q].sign * entries[p].amp * std::conj(entries[q].amp);
        s = e;
    }
    const double tr = rho.trace().real();
    if (tr > 0.0) rho /= tr;
    return rho;
}

double fock_entropy(const FockVector &vec, const Subsystem &A) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(fock_reduced_dm(vec, A), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

} // namespace dqap
