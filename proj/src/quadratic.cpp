#include "varlc/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace varlc {

QuadraticLagrangianSystem lc_system(const CircuitParams& p) {
    p.validate();
    QuadraticLagrangianSystem sys;
    sys.A = Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 1.0}};
    sys.R = Matrix{{p.L4 + p.L3, -p.L4, -p.L4},
                   {-p.L4, p.L4 + p.L5, p.L4},
                   {-p.L4, p.L4, p.L4 + p.L6}};
    const double c1 = p.C1, c2 = p.C2;
    sys.V = [c1, c2](const Vec& x) {
        return x[0] * x[0] / (2.0 * c1) + x[1] * x[1] / (2.0 * c2);
    };
    sys.gradV = [c1, c2](const Vec& x) { return Vec{x[0] / c1, x[1] / c2}; };
    sys.B = Matrix::identity(3);
    const double T = p.horizon();
    sys.alpha = Vec{-p.lambda3 / T, -p.lambda5 / T, -p.lambda6 / T};
    sys.t0 = p.t0;
    sys.t1 = p.t1;
    return sys;
}

QuadraticLagrangianSystem electromech_system(const ElectromechParams& p) {
    if (!(p.L1 > 0.0) || !(p.L2 > 0.0) || !(p.C0 > 0.0) || !(p.mass > 0.0) ||
        !(p.length > 0.0) || !(p.t1 > p.t0))
        throw std::invalid_argument("electromech_system: non-positive physical parameter");
    QuadraticLagrangianSystem sys;
    sys.A = Matrix{{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    sys.R = Matrix::diagonal({p.L1, p.L2, p.mass * p.length * p.length});
    const double c0 = p.C0, kap = p.kappa, mgl = p.mass * p.gravity * p.length;
    // Electric energy with the plate-angle capacitance C(theta) =
    // C0/(1 + kappa*theta): q^2 (1 + kappa*theta) / (2 C0); gravity supplies
    // -mgl cos(theta).
    sys.V = [c0, kap, mgl](const Vec& x) {
        return x[0] * x[0] * (1.0 + kap * x[1]) / (2.0 * c0) - mgl * std::cos(x[1]);
    };
    sys.gradV = [c0, kap, mgl](const Vec& x) {
        return Vec{x[0] * (1.0 + kap * x[1]) / c0,
                   x[0] * x[0] * kap / (2.0 * c0) + mgl * std::sin(x[1])};
    };
    sys.t0 = p.t0;
    sys.t1 = p.t1;
    return sys;
}

ControlSystem to_control_system(const QuadraticLagrangianSystem& q) {
    ControlSystem sys;
    sys.n = q.n();
    sys.m = q.m();
    sys.l = q.l();
    sys.t0 = q.t0;
    sys.t1 = q.t1;

    const Matrix A = q.A;
    const Matrix R = q.R;
    const auto V = q.V;
    const auto gradV = q.gradV;
    const std::size_t n = A.rows(), m = A.cols();

    sys.f = [A](const Vec&, const Vec& u) { return A * u; };
    sys.f_x = [n](const Vec&, const Vec&) { return Matrix(n, n); };
    sys.f_u = [A](const Vec&, const Vec&) { return A; };
    sys.L = [R, V](const Vec& x, const Vec& u) {
        const Vec ru = R * u;
        return 0.5 * dot(u, ru) - V(x);
    };
    sys.L_x = [gradV](const Vec& x, const Vec&) {
        Vec g = gradV(x);
        for (auto& v : g) v = -v;
        return g;
    };
    sys.L_u = [R](const Vec&, const Vec& u) { return R * u; };
    (void)m;

    if (q.B) {
        if (!q.alpha || q.alpha->size() != q.B->rows())
            throw std::invalid_argument("to_control_system: constraint offset missing");
        sys.constraint = LinearConstraint{*q.B, *q.alpha};
    }
    return sys;
}

}  // namespace varlc
