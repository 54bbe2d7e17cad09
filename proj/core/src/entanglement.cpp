#include "dqap/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqap {

namespace {

double binary_entropy(double d) {
    d = std::clamp(d, 0.0, 1.0);
    double s = 0.0;
    if (d > 0.0) s -= d * std::log(d);
    if (d < 1.0) s -= (1.0 - d) * std::log(1.0 - d);
    return s;
}

RVector hermitian_eigenvalues(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("hermitian eigensolver failed");
    return es.eigenvalues();
}

} // namespace

Subsystem contiguous_block(int first, int length) {
    Subsystem a(length);
    for (int i = 0; i < length; ++i) a[i] = first + i;
    return a;
}

void validate_subsystem(const Subsystem &A, int L) {
    std::vector<int> s = A;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InvalidSpec("subsystem has duplicate sites");
    if (!s.empty() && (s.front() < 0 || s.back() >= L))
        throw InvalidSpec("subsystem site out of range");
}

bool is_bond_preserving(const Subsystem &A, int L) {
    std::vector<bool> in(L, false);
    for (int x : A) in[x] = true;
    for (int p = 0; p + 1 < L; p += 2)
        if (in[p] != in[p + 1]) return false;
    return true;
}

CMatrix one_particle_dm(const SlaterState &state, const Subsystem &A) {
    validate_subsystem(A, state.L());
    const CMatrix P = occupied_projector(state);
    const int n = static_cast<int>(A.size());
    CMatrix D(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) D(a, b) = P(A[b], A[a]);
    return D;
}

RVector correlation_spectrum(const CMatrix &dm) {
    RVector ev = hermitian_eigenvalues(dm);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < -1e-8 || ev(i) > 1.0 + 1e-8)
            throw SpectrumError("one-particle density matrix eigenvalue " + std::to_string(ev(i)) +
                                " outside [0, 1]");
    return ev;
}

RVector correlation_spectrum(const SlaterState &state, const Subsystem &A) {
    return correlation_spectrum(one_particle_dm(state, A));
}

double entropy_from_spectrum(const RVector &delta) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < delta.size(); ++i) s += binary_entropy(delta(i));
    return s;
}

double entropy_via_entanglement_hamiltonian(const RVector &delta) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < delta.size(); ++i) {
        const double d = delta(i);
        if (d <= 1e-12 || d >= 1.0 - 1e-12) continue;
        const double lam = std::log(1.0 - d) - std::log(d);
        s += lam / (1.0 + std::exp(lam)) + std::log1p(std::exp(-lam));
    }
    return s;
}

double entanglement_entropy(const SlaterState &state, const Subsystem &A) {
    return entropy_from_spectrum(correlation_spectrum(state, A));
}

double mutual_information_2site(double nx, double nxp, cplx cxxp) {
    // eigenvalues of [[nx, c], [c*, nxp]] in closed form
    const double mean = 0.5 * (nx + nxp);
    const double half = 0.5 * (nx - nxp);
    const double r = std::sqrt(half * half + std::norm(cxxp));
    const double sxx = binary_entropy(mean - r) + binary_entropy(mean + r);
    return binary_entropy(nx) + binary_entropy(nxp) - sxx;
}

double mutual_information(const SlaterState &state, int x, int xp) {
    if (x == xp) throw InvalidSpec("mutual information needs two distinct sites");
    const CMatrix D = one_particle_dm(state, {x, xp});
    return mutual_information_2site(D(0, 0).real(), D(1, 1).real(), D(0, 1));
}

BoundaryDiagnostic boundary_rank_diagnostic(const SlaterState &state, const Subsystem &A) {
    const CMatrix D = one_particle_dm(state, A);
    BoundaryDiagnostic out;
    out.spectrum = correlation_spectrum(D);
    const CMatrix Q = D * D - D;
    Eigen::JacobiSVD<CMatrix> svd(Q);
    const RVector &sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8) ++out.rank;
    std::vector<double> interior;
    for (Eigen::Index i = 0; i < out.spectrum.size(); ++i) {
        const double d = out.spectrum(i);
        if (std::abs(d) <= 1e-8)
            ++out.n_zero;
        else if (std::abs(d - 1.0) <= 1e-8)
            ++out.n_one;
        else
            interior.push_back(d);
    }
    out.pairwise_degenerate = interior.size() % 2 == 0;
    for (size_t i = 0; out.pairwise_degenerate && i + 1 < interior.size(); i += 2)
        if (interior[i + 1] - interior[i] >= 1e-6) out.pairwise_degenerate = false;
    return out;
}

std::vector<double> entropy_exponents(int first_M, const std::vector<double> &S) {
    if (first_M < 1) throw InvalidSpec("series must start at M >= 1");
    std::vector<double> out;
    for (size_t i = 0; i + 1 < S.size(); ++i) {
        const double M = first_M + static_cast<double>(i);
        out.push_back(3.0 * (S[i + 1] - S[i]) / (std::log(M + 1.0) - std::log(M)));
    }
    return out;
}

std::vector<double> energy_exponents(int first_M, const std::vector<double> &deps) {
    if (first_M < 1) throw InvalidSpec("series must start at M >= 1");
    for (double d : deps)
        if (!(d > 0.0)) throw InvalidSpec("energy deviations must be positive");
    std::vector<double> out;
    for (size_t i = 0; i + 1 < deps.size(); ++i) {
        const double M = first_M + static_cast<double>(i);
        // sign chosen so that deps ~ M^-2 gives +1
        out.push_back(-0.5 * (std::log(deps[i + 1]) - std::log(deps[i])) /
                      (std::log(M + 1.0) - std::log(M)));
    }
    return out;
}

ScalingExponents scaling_exponents(int first_M, const std::vector<double> &S,
                                   const std::vector<double> &deps) {
    ScalingExponents out;
    out.delta_S = entropy_exponents(first_M, S);
    out.delta_E = energy_exponents(first_M, deps);
    const size_t n = std::max(out.delta_S.size(), out.delta_E.size());
    for (size_t i = 0; i < n; ++i) out.M.push_back(first_M + static_cast<int>(i));
    return out;
}

} // namespace dqap
