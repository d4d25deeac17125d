#include "varlc/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "varlc/kernels.hpp"

namespace varlc {

namespace {

constexpr double kPi = std::numbers::pi;

const double* row_ptr(const Matrix& m, std::size_t row) {
    return m.data().data() + row * m.cols();
}

void check_shape(const FourierCurrents& fc) {
    if (fc.Ntrunc < 0 || fc.lambda.size() != 3 ||
        fc.a.rows() != 3 || fc.b.rows() != 3 ||
        fc.a.cols() != static_cast<std::size_t>(fc.Ntrunc) ||
        fc.b.cols() != static_cast<std::size_t>(fc.Ntrunc) ||
        !(fc.T > 0.0))
        throw std::invalid_argument("FourierCurrents: inconsistent shape");
}

void check_horizon(const CircuitParams& p, const FourierCurrents& fc) {
    if (std::abs(fc.T - p.horizon()) > 1e-12 * std::max(1.0, p.horizon()))
        throw std::invalid_argument("FourierCurrents horizon does not match circuit horizon");
}

}  // namespace

FourierCurrents FourierCurrents::zero(double T, double t0, int Ntrunc) {
    FourierCurrents fc;
    fc.T = T;
    fc.t0 = t0;
    fc.lambda = Vec(3, 0.0);
    fc.a = Matrix(3, static_cast<std::size_t>(Ntrunc));
    fc.b = Matrix(3, static_cast<std::size_t>(Ntrunc));
    fc.Ntrunc = Ntrunc;
    return fc;
}

std::array<double, 3> sample_currents(const FourierCurrents& fc, double t) {
    check_shape(fc);
    const double slack = 1e-12 * std::max(1.0, fc.T);
    if (t < fc.t0 - slack || t > fc.t0 + fc.T + slack)
        throw std::domain_error("sample_currents: instant outside the horizon");
    const double theta = 2.0 * kPi * (t - fc.t0) / fc.T;
    std::array<double, 3> out{};
    for (std::size_t k = 0; k < 3; ++k) {
        double v = 0.0;
        kernels::fourier_series_eval(row_ptr(fc.a, k), row_ptr(fc.b, k),
                                     static_cast<std::size_t>(fc.Ntrunc),
                                     fc.lambda[k] / fc.T, &theta, 1, &v);
        out[k] = v;
    }
    return out;
}

std::vector<std::array<double, 3>> sample_currents_grid(const FourierCurrents& fc,
                                                        const Vec& times) {
    check_shape(fc);
    const double slack = 1e-12 * std::max(1.0, fc.T);
    Vec theta(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] < fc.t0 - slack || times[j] > fc.t0 + fc.T + slack)
            throw std::domain_error("sample_currents_grid: instant outside the horizon");
        theta[j] = 2.0 * kPi * (times[j] - fc.t0) / fc.T;
    }
    Vec channel(times.size());
    std::vector<std::array<double, 3>> out(times.size());
    for (std::size_t k = 0; k < 3; ++k) {
        kernels::fourier_series_eval(row_ptr(fc.a, k), row_ptr(fc.b, k),
                                     static_cast<std::size_t>(fc.Ntrunc),
                                     fc.lambda[k] / fc.T, theta.data(), theta.size(),
                                     channel.data());
        for (std::size_t j = 0; j < times.size(); ++j) out[j][k] = channel[j];
    }
    return out;
}

FunctionalBreakdown evaluate_functional(const CircuitParams& p,
                                        const FourierCurrents& fc) {
    p.validate();
    check_shape(fc);
    check_horizon(p, fc);

    const double T = fc.T;
    const std::size_t N = static_cast<std::size_t>(fc.Ntrunc);
    const double* a3 = row_ptr(fc.a, 0);
    const double* a5 = row_ptr(fc.a, 1);
    const double* a6 = row_ptr(fc.a, 2);
    const double* b3 = row_ptr(fc.b, 0);
    const double* b5 = row_ptr(fc.b, 1);
    const double* b6 = row_ptr(fc.b, 2);

    // Workspaces reused across the four channel combinations.
    Vec w1(N), w2(N), w3(N), w4(N);

    const auto quad_block = [&](const double* x3, const double* x5, const double* x6) {
        // (T/4) [ L4 sum (x3-x5-x6)^2 + L3 sum x3^2 + L5 sum x5^2 + L6 sum x6^2 ]
        // - (T^3/16 pi^2) [ sum (x3/n)^2 / C1 + sum ((x5+x6)/n)^2 / C2 ]
        for (std::size_t i = 0; i < N; ++i) {
            const double n = static_cast<double>(i + 1);
            w1[i] = x3[i] - x5[i] - x6[i];
            w2[i] = x3[i] / n;
            w3[i] = (x5[i] + x6[i]) / n;
        }
        const double ind = p.L4 * kernels::sum_squares(w1.data(), N) +
                           p.L3 * kernels::sum_squares(x3, N) +
                           p.L5 * kernels::sum_squares(x5, N) +
                           p.L6 * kernels::sum_squares(x6, N);
        const double cap = kernels::sum_squares(w2.data(), N) / p.C1 +
                           kernels::sum_squares(w3.data(), N) / p.C2;
        return 0.25 * T * ind - std::pow(T, 3) / (16.0 * kPi * kPi) * cap;
    };

    FunctionalBreakdown out;
    out.Q1 = quad_block(a3, a5, a6);
    out.Q2 = quad_block(b3, b5, b6);

    // Sine means couple through the squared first moments.
    for (std::size_t i = 0; i < N; ++i) {
        const double n = static_cast<double>(i + 1);
        w1[i] = b3[i] / n;
        w2[i] = (b5[i] + b6[i]) / n;
        w3[i] = a3[i] / (n * n);
        w4[i] = (a5[i] + a6[i]) / (n * n);
    }
    const double sb1 = kernels::sum(w1.data(), N);
    const double sb2 = kernels::sum(w2.data(), N);
    const double sa1 = kernels::sum(w3.data(), N);
    const double sa2 = kernels::sum(w4.data(), N);
    out.Q2 -= std::pow(T, 3) / (8.0 * kPi * kPi) * (sb1 * sb1 / p.C1 + sb2 * sb2 / p.C2);
    out.Q = out.Q1 + out.Q2;

    const double l3 = fc.lambda[0], l5 = fc.lambda[1], l6 = fc.lambda[2];
    const double l56 = l5 + l6;
    out.Lpart = -(T * T / (4.0 * kPi)) *
                    ((2.0 * p.q1_0 + l3) * sb1 / p.C1 + (2.0 * p.q2_0 + l56) * sb2 / p.C2) +
                (T * T / (4.0 * kPi * kPi)) * (l3 * sa1 / p.C1 + l56 * sa2 / p.C2);

    out.Npart = (p.L3 * l3 * l3 + p.L5 * l5 * l5 + p.L6 * l6 * l6 +
                 p.L4 * (l3 - l5 - l6) * (l3 - l5 - l6)) /
                    (2.0 * T) -
                (T / (6.0 * p.C1)) * (3.0 * p.q1_0 * p.q1_0 + 3.0 * p.q1_0 * l3 + l3 * l3) -
                (T / (6.0 * p.C2)) *
                    (3.0 * p.q2_0 * p.q2_0 + 3.0 * p.q2_0 * l56 + l56 * l56);

    out.total = out.Q + out.Lpart + out.Npart;
    return out;
}

double evaluate_functional_time_domain(const CircuitParams& p,
                                       const FourierCurrents& fc,
                                       std::int64_t quad_steps) {
    p.validate();
    check_shape(fc);
    check_horizon(p, fc);
    if (quad_steps < 64)
        throw std::invalid_argument("evaluate_functional_time_domain requires quad_steps >= 64");
    if (quad_steps % 2 != 0) ++quad_steps;  // Simpson needs an even panel count

    const double T = fc.T;
    const std::size_t N = static_cast<std::size_t>(fc.Ntrunc);
    const std::size_t pts = static_cast<std::size_t>(quad_steps) + 1;
    Vec theta(pts);
    for (std::size_t j = 0; j < pts; ++j)
        theta[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(quad_steps);

    // Charge accumulated by channel k from t0 to tau:
    //   int_0^tau i_k = lambda*tau/T + sum_n [ a*fac*sin(n th) + b*fac*(1 - cos(n th)) ]
    // with fac = T/(2 pi n); the (1 - cos) pieces contribute the constant
    // sum(b*fac) plus a cosine series with coefficients -b*fac.
    Vec ac(N), bc(N), cur(pts), chg(pts);
    std::vector<Vec> current(3, Vec(pts)), charge(3, Vec(pts));
    for (std::size_t k = 0; k < 3; ++k) {
        const double* a = fc.a.data().data() + k * N;
        const double* b = fc.b.data().data() + k * N;
        kernels::fourier_series_eval(a, b, N, fc.lambda[k] / T, theta.data(), pts,
                                     current[k].data());
        double bsum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double fac = T / (2.0 * kPi * static_cast<double>(i + 1));
            ac[i] = -b[i] * fac;
            bc[i] = a[i] * fac;
            bsum += b[i] * fac;
        }
        kernels::fourier_series_eval(ac.data(), bc.data(), N, bsum, theta.data(), pts,
                                     charge[k].data());
        for (std::size_t j = 0; j < pts; ++j)
            charge[k][j] += fc.lambda[k] * static_cast<double>(j) / static_cast<double>(quad_steps);
    }

    Vec dens(pts);
    for (std::size_t j = 0; j < pts; ++j) {
        const double i3 = current[0][j], i5 = current[1][j], i6 = current[2][j];
        const double q1 = p.q1_0 + charge[0][j];
        const double q2 = p.q2_0 + charge[1][j] + charge[2][j];
        const double shared = i3 - i5 - i6;
        dens[j] = 0.5 * (p.L3 * i3 * i3 + p.L4 * shared * shared + p.L5 * i5 * i5 +
                         p.L6 * i6 * i6) -
                  q1 * q1 / (2.0 * p.C1) - q2 * q2 / (2.0 * p.C2);
    }

    double acc = dens[0] + dens[pts - 1];
    for (std::size_t j = 1; j + 1 < pts; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * dens[j];
    return acc * (T / static_cast<double>(quad_steps)) / 3.0;
}

Vec extremal_sequence(double K, double alpha, double scale, std::int64_t n_max) {
    if (!(K > alpha))
        throw std::domain_error("extremal_sequence requires K > alpha");
    Vec x(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        x[static_cast<std::size_t>(n - 1)] = scale / (K * nn - alpha / nn);
    }
    return x;
}

double extremal_equality_gap(const SeriesConstant& sc, std::int64_t n_max) {
    const double K = sc.K, alpha = sc.alpha, beta = sc.beta;
    if (!(K > alpha) || n_max < 1)
        throw std::domain_error("extremal_equality_gap requires K > alpha and n_max >= 1");

    // Truncated sums over x_n = 1/(K n - alpha/n):
    //   S1 ~ sum 1/(K n^2 - alpha),  S2 ~ sum 1/(K n^2 - alpha)^2,
    //   S0 ~ sum n^2/(K n^2 - alpha)^2.
    double s1 = 0.0, s2 = 0.0, s0 = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        const double d = K * nn * nn - alpha;
        s1 += 1.0 / d;
        s2 += 1.0 / (d * d);
        s0 += nn * nn / (d * d);
    }

    // Tail corrections sum_{n>N} f(n) ~ int_{N+1}^inf f + f(N+1)/2 - f'(N+1)/12.
    // Plain truncation leaves a first-order O(1/(K N)) imbalance because the
    // squared first moment feeds the tail of S1 through 2*beta*S1*tail.
    const double b = static_cast<double>(n_max) + 1.0;
    const double den = K * b * b - alpha;
    double I1, I2;
    if (alpha > 0.0) {
        const double sk = std::sqrt(K), sa = std::sqrt(alpha);
        I1 = std::log((sk * b + sa) / (sk * b - sa)) / (2.0 * sk * sa);
        I2 = (b / den - I1) / (2.0 * alpha);
    } else {
        I1 = 1.0 / (K * b);
        I2 = 1.0 / (3.0 * K * K * b * b * b);
    }
    const double I3 = (I1 + alpha * I2) / K;
    const double f1 = 1.0 / den, f1p = -2.0 * K * b / (den * den);
    const double f2 = f1 * f1, f2p = -4.0 * K * b / (den * den * den);
    const double f3 = b * b * f2, f3p = -2.0 * b * (K * b * b + alpha) / (den * den * den);

    const double S1 = s1 + I1 + 0.5 * f1 - f1p / 12.0;
    const double S2 = s2 + I2 + 0.5 * f2 - f2p / 12.0;
    const double S0 = s0 + I3 + 0.5 * f3 - f3p / 12.0;

    const double lhs = alpha * S2 + beta * S1 * S1;
    const double rhs = K * S0;
    return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace varlc
