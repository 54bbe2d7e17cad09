#include "dqap/lattice.hpp"

#include <cmath>
#include <string>

namespace dqap {

void LatticeSpec::validate() const {
    if (L < 2 || L % 2 != 0) throw InvalidSpec("L must be a positive even integer, got " + std::to_string(L));
    if (N <= 0 || N > L) throw InvalidSpec("N must satisfy 0 < N <= L, got " + std::to_string(N));
    if (gamma != 1 && gamma != -1) throw InvalidSpec("gamma must be +1 or -1");
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidSpec("hopping t must be positive");
}

LatticeSpec LatticeSpec::half_filled(int L, int gamma, double t) {
    LatticeSpec s{L, L / 2, gamma, t};
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::closed_shell(int L, double t) {
    return half_filled(L, (L / 2) % 2 == 0 ? -1 : 1, t);
}

int gamma_of(Boundary b) { return b == Boundary::Periodic ? 1 : -1; }

CMatrix build_v1(const LatticeSpec &spec) {
    spec.validate();
    CMatrix v = CMatrix::Zero(spec.L, spec.L);
    for (int x = 0; x + 1 < spec.L; x += 2) {
        v(x, x + 1) += -spec.t;
        v(x + 1, x) += -spec.t;
    }
    return v;
}

CMatrix build_v2(const LatticeSpec &spec) {
    spec.validate();
    const int L = spec.L;
    CMatrix v = CMatrix::Zero(L, L);
    for (int x = 1; x + 1 < L; x += 2) {
        v(x, x + 1) += -spec.t;
        v(x + 1, x) += -spec.t;
    }
    v(0, L - 1) += -spec.gamma * spec.t;
    v(L - 1, 0) += -spec.gamma * spec.t;
    return v;
}

CMatrix build_hamiltonian(const LatticeSpec &spec) { return build_v1(spec) + build_v2(spec); }

GroundState ground_state_of(const CMatrix &h, int N, double scale) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw Error("hermitian eigensolver failed");
    const RVector &ev = es.eigenvalues();
    if (N < ev.size() && ev(N) - ev(N - 1) < 1e-10 * scale)
        throw OpenShellError("open shell: levels " + std::to_string(N) + " and " +
                             std::to_string(N + 1) + " are degenerate");
    GroundState gs;
    gs.state = SlaterState(es.eigenvectors().leftCols(N), true);
    gs.energy = ev.head(N).sum();
    gs.spectrum = ev;
    return gs;
}

GroundState exact_ground_state(const LatticeSpec &spec) {
    spec.validate();
    return ground_state_of(build_hamiltonian(spec), spec.N, spec.t);
}

SlaterState initial_state(const LatticeSpec &spec) {
    spec.validate();
    if (2 * spec.N != spec.L) throw InvalidSpec("initial state requires half filling N = L/2");
    CMatrix psi = CMatrix::Zero(spec.L, spec.N);
    const double a = 1.0 / std::sqrt(2.0);
    for (int n = 0; n < spec.N; ++n) {
        psi(2 * n, n) = a;
        psi(2 * n + 1, n) = a;
    }
    return SlaterState(std::move(psi), true);
}

int lieb_robinson_depth(int L) { return (L - 2 + 3) / 4; }

} // namespace dqap
