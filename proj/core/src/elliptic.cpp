#include "ybforge/classical.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "ybforge/freealg.hpp"

namespace ybforge::classical {

namespace {

using std::numbers::pi;
const Complex I(0, 1);

Scalar var(const std::string& name) { return Scalar::variable(name); }

BDSetting sl2_loop() { return affine_setting(traceless_slN_basis(2, Scalar(1))); }

BDTriple cyclic_sl2(const Scalar& eps) {
    BDTriple t;
    t.gamma1 = {0, 1};
    t.tau = {{0, 1}, {1, 0}};
    t.eps = eps;
    return t;
}

void check_disc(const Scalar& eps) {
    if (auto r = eps.as_rational(); r && abs(*r) >= 1) fail(ErrorKind::EpsilonOutOfDisc, "|eps| must be below 1");
}

// Factor in the homogeneous picture, legs carrying lam and mu.
Eigen::Matrix4cd homogeneous_factor(int m, Complex eps, Complex q, Complex lam, Complex mu, Form form) {
    Complex t = std::pow(eps, m), y = lam / mu, s = 1.0 / q - q;
    Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
    if (m % 2) {
        Complex a = form == Form::Derived ? 1.0 - t * t * y : 1.0 - t * t;
        Complex b = 1.0 - q * q * t * t * y;
        f(0, 0) = f(3, 3) = a;
        f(1, 1) = f(2, 2) = b;
        f(0, 3) = t * s / mu;
        f(3, 0) = t * s * lam;
    } else {
        f(0, 0) = f(3, 3) = 1.0 - q * q * t * t * y;
        f(1, 1) = f(2, 2) = 1.0 - t * t * y;
        f(1, 2) = t * s;
        f(2, 1) = t * s * y;
    }
    return f;
}

Eigen::Matrix4cd homogeneous_R(Complex q, Complex lam, Complex mu) {
    Complex d = q * q * lam - mu;
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    r(0, 0) = r(3, 3) = 1;
    r(1, 1) = r(2, 2) = q * (lam - mu) / d;
    r(1, 2) = (q * q - 1.0) * mu / d;
    r(2, 1) = (q * q - 1.0) * lam / d;
    return r;
}

// Conjugation by D(lambda) (x) 1, D = diag(lambda^{1/4}, lambda^{-1/4}), lambda = exp(2 pi i u).
Eigen::Matrix4cd to_symmetric_frame(const Eigen::Matrix4cd& m, Complex u) {
    Complex q4 = std::exp(I * pi * u / 2.0);
    Eigen::Vector4cd d(q4, q4, 1.0 / q4, 1.0 / q4);
    Eigen::Matrix4cd out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = d(i) * m(i, j) / d(j);
    return out;
}

Eigen::Matrix4cd swap4() {
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    p(0, 0) = p(3, 3) = p(1, 2) = p(2, 1) = 1;
    return p;
}

struct Theta {
    Complex t1, t2, t3, t4;  // t1 and t2 without their q^{1/4} factor
};

Theta theta(Complex z, Complex q) {
    if (std::abs(q) >= 1) fail(ErrorKind::ConvergenceFailure, "nome must lie in the unit disc");
    Theta th{0, 0, 1, 1};
    for (int n = 0; n < 400; ++n) {
        Complex qa = std::pow(q, n * (n + 1));
        Complex odd = double(2 * n + 1) * z;
        double sign = n % 2 ? -1 : 1;
        th.t1 += 2.0 * sign * qa * std::sin(odd);
        th.t2 += 2.0 * qa * std::cos(odd);
        if (n > 0) {
            Complex qb = std::pow(q, n * n);
            th.t3 += 2.0 * qb * std::cos(2.0 * n * z);
            th.t4 += 2.0 * sign * qb * std::cos(2.0 * n * z);
        }
        double size = std::abs(std::pow(q, n * n)) * std::cosh(std::abs((2.0 * n + 1) * z.imag()));
        if (n > 2 && size < 1e-20) return th;
    }
    fail(ErrorKind::ConvergenceFailure, "theta series did not converge");
}

// Complete elliptic integral for the nome, K = (pi / 2) theta_3(0)^2.
Complex K_of_nome(Complex nome) {
    Complex t3 = theta(0, nome).t3;
    return pi / 2.0 * t3 * t3;
}

Complex modulus_of_nome(Complex nome) {
    Theta z = theta(0, nome);
    Complex r = z.t2 / z.t3;
    return std::sqrt(nome) * r * r;
}

}  // namespace

// ------------------------------------------------------------ classical series

Matrix elliptic_trig_r() { return setting_standard_r(sl2_loop()); }

Matrix elliptic_x_m(const Scalar& eps, int m) {
    if (m < 1) fail(ErrorKind::InvalidArgument, "m must be positive");
    BDSetting s = sl2_loop();
    BDTriple t = cyclic_sl2(eps);
    std::size_t n = 2;
    Matrix s3 = Matrix::unit(n, n, 0, 0) - Matrix::unit(n, n, 1, 1);
    const Matrix& f1 = s.simple_pos[1];
    const Matrix& f0 = s.simple_pos[0];
    Matrix g1 = dual_element(s, f1), g0 = dual_element(s, f0);
    std::vector<Matrix> ansatz = {tensor(s3, s3), leg_tensor(s, f1, g1) + leg_tensor(s, f0, g0),
                                  leg_tensor(s, f1, g0) + leg_tensor(s, f0, g1)};
    Matrix zero(n * n, n * n);
    Matrix base = x_m_residual(s, t, m, zero, 1);
    std::vector<Matrix> parts;
    for (auto& a : ansatz) parts.push_back(x_m_residual(s, t, m, a, 1) - base);
    std::vector<linsolve::Row> rows;
    for (std::size_t i = 0; i < base.rows(); ++i)
        for (std::size_t j = 0; j < base.cols(); ++j) {
            linsolve::Row row;
            for (std::size_t u = 0; u < parts.size(); ++u)
                if (!parts[u](i, j).is_zero()) row.coeffs[u] = parts[u](i, j);
            row.rhs = -base(i, j);
            if (!row.coeffs.empty() || !row.rhs.is_zero()) rows.push_back(std::move(row));
        }
    auto c = linsolve::solve_unique(rows, ansatz.size());
    Matrix x = zero;
    for (std::size_t u = 0; u < ansatz.size(); ++u) x += c[u] * ansatz[u];
    return x;
}

Matrix elliptic_r_series(const Scalar& eps, int terms, Form form) {
    check_disc(eps);
    if (terms < 1) fail(ErrorKind::InvalidArgument, "terms must be positive");
    BDSetting s = sl2_loop();
    std::size_t n = 2;
    Matrix s3 = Matrix::unit(n, n, 0, 0) - Matrix::unit(n, n, 1, 1);
    const Matrix& f1 = s.simple_pos[1];
    const Matrix& f0 = s.simple_pos[0];
    Matrix g1 = dual_element(s, f1), g0 = dual_element(s, f0);
    Matrix S = tensor(s3, s3);
    Matrix B = leg_tensor(s, f1, g1) + leg_tensor(s, f0, g0);
    Matrix C = leg_tensor(s, f1, g0) + leg_tensor(s, f0, g1);
    Scalar y = spectral_ratio("lambda", "mu");
    Scalar sign = form == Form::Derived ? Scalar(-1) : Scalar(1);
    Scalar weight = form == Form::Derived ? Scalar(mpq_class(1, 2)) : Scalar(1);
    Matrix X(n * n, n * n);
    for (long k = 1; k <= terms; ++k) {
        Scalar e2 = eps.pow(2 * k), e4 = eps.pow(4 * k - 2), e1 = eps.pow(2 * k - 1);
        X += (Scalar(-1) * sign * weight * e2 / (Scalar(1) + e2) * y.pow(k)) * S;
        X += (sign * e4 / (Scalar(1) - e4) * y.pow(k - 1)) * B;
        X += (sign * e1 / (Scalar(1) - e4) * y.pow(k - 1)) * C;
    }
    return elliptic_trig_r() + X - transpose_legs(X, n);
}

// ------------------------------------------------------------ quantum product

Eigen::Matrix4cd elliptic_factor(int m, Complex eps, Complex q, Complex u, Form form) {
    Complex lam = std::exp(2.0 * pi * I * u);
    return to_symmetric_frame(homogeneous_factor(m, eps, q, lam, 1.0, form), u);
}

Matrix solve_elliptic_factor(int parity) {
    using namespace freealg;
    auto W = reps::evaluation_rep(reps::fundamental_slN(2));
    auto alg = Algebra::create(W.spec);
    std::vector<const reps::Representation*> legs = {&W, &W};
    auto ev = [&](const AlgebraElement& a, const AlgebraElement& b) {
        return reps::evaluate(TensorElement::product({a, b}), legs, {"lambda", "mu"});
    };
    auto one = AlgebraElement::one(alg);
    Scalar t = var("t");
    // [1 (x) f_s, F] = -t ((f_s' (x) K_s) F - F (f_s' (x) K^s)), tau^m s' = s.
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t s = 0; s < 2; ++s) {
        std::size_t sp = parity % 2 ? 1 - s : s;
        Matrix E = ev(one, rescaled_generator(alg, 1, s));
        Matrix U = ev(rescaled_generator(alg, 1, sp), AlgebraElement::cartan(alg, alg->B(s)));
        Matrix V = ev(rescaled_generator(alg, 1, sp), AlgebraElement::cartan(alg, alg->A(s).inverse()));
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                std::vector<Scalar> row(16);
                for (std::size_t p = 0; p < 4; ++p)
                    for (std::size_t r = 0; r < 4; ++r) {
                        Matrix u = Matrix::unit(4, 4, p, r);
                        Matrix res = E * u - u * E + t * (U * u - u * V);
                        row[p * 4 + r] = res(a, b);
                    }
                rows.push_back(std::move(row));
            }
    }
    auto ns = linsolve::nullspace(rows, 16);
    if (ns.size() != 1) fail(ErrorKind::IntertwinerNotUnique, "factor recursion does not fix F^m up to scale");
    Matrix f(4, 4);
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t r = 0; r < 4; ++r) f(p, r) = ns[0][p * 4 + r];
    if (f(0, 0).is_zero()) fail(ErrorKind::NoSolution, "factor has a vanishing corner entry");
    Scalar norm = f(0, 0).inverse();
    return norm * f;
}

Eigen::Matrix4cd trig_R(Complex q, Complex u) {
    Complex lam = std::exp(2.0 * pi * I * u);
    return to_symmetric_frame(homogeneous_R(q, lam, 1.0), u);
}

Eigen::Matrix4cd elliptic_R_product(Complex eps, Complex q, Complex u, int M, Form form) {
    if (std::abs(eps) >= 1) fail(ErrorKind::EpsilonOutOfDisc, "|eps| must be below 1");
    if (M < 1) fail(ErrorKind::InvalidArgument, "at least one factor is needed");
    Complex lam = std::exp(2.0 * pi * I * u), mu = 1.0;
    Eigen::Matrix4cd F = Eigen::Matrix4cd::Identity(), Fs = Eigen::Matrix4cd::Identity();
    for (int m = 1; m <= M; ++m) {
        F = F * homogeneous_factor(m, eps, q, lam, mu, form);
        Fs = Fs * homogeneous_factor(m, eps, q, mu, lam, form);
    }
    Eigen::Matrix4cd P = swap4();
    Eigen::Matrix4cd Ft = P * Fs * P;
    Eigen::FullPivLU<Eigen::Matrix4cd> lu(Ft);
    if (!lu.isInvertible()) fail(ErrorKind::NonConvergent, "transposed product is singular");
    Eigen::Matrix4cd R = lu.solve(homogeneous_R(q, lam, mu) * F);
    return to_symmetric_frame(R, u);
}

// ------------------------------------------------------------ Jacobi functions

Complex complete_K(Complex k) {
    Complex a = 1.0, b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 200; ++i) {
        if (std::abs(a - b) <= 1e-15 * std::abs(a)) return pi / (2.0 * a);
        Complex an = (a + b) / 2.0, bn = std::sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
        // Rounding can stall the difference just above the threshold.
        if (an == a && bn == b) return pi / (2.0 * a);
        a = an;
        b = bn;
    }
    fail(ErrorKind::ConvergenceFailure, "arithmetic-geometric mean did not converge");
}

Complex nome_of(Complex k) {
    if (k == Complex(0)) return 0;
    Complex kp = std::sqrt(1.0 - k * k);
    return std::exp(-pi * complete_K(kp) / complete_K(k));
}

Jacobi jacobi_nome(Complex u, Complex nome) {
    Theta zero = theta(0, nome);
    Complex z = u / (zero.t3 * zero.t3);
    Theta th = theta(z, nome);
    return {zero.t3 / zero.t2 * th.t1 / th.t4, zero.t4 / zero.t2 * th.t2 / th.t4, zero.t4 / zero.t3 * th.t3 / th.t4};
}

Jacobi jacobi_elliptic(Complex u, Complex k) { return jacobi_nome(u, nome_of(k)); }

std::array<Complex, 3> elliptic_ratios(const Eigen::Matrix4cd& R) {
    Complex a = R(0, 0), b = R(1, 1), c = R(1, 2), d = R(0, 3);
    return {(a + d) / (a - d), (b + c) / (a - d), (b - c) / (a - d)};
}

std::array<Complex, 3> jacobi_ratios(Complex u, Complex nome, Complex rho) {
    Complex w = K_of_nome(nome) * u;
    Jacobi p = jacobi_nome(w + rho, nome), m = jacobi_nome(w - rho, nome);
    return {p.dn / m.dn, p.cn / m.cn, p.sn / m.sn};
}

EllipticFit fit_elliptic(Complex eps, Complex q, int M, const std::vector<double>& fit_points,
                         const std::vector<double>& check_points, Form form, int threads) {
    if (fit_points.size() < 2) fail(ErrorKind::InvalidArgument, "two fit points are needed");
    std::vector<std::array<Complex, 3>> data;
    for (double u : fit_points) data.push_back(elliptic_ratios(elliptic_R_product(eps, q, u, M, form)));
    const int params = 4;
    const Eigen::Index eqs = Eigen::Index(fit_points.size()) * 6;
    auto residual = [&](const Eigen::Vector4d& p) {
        Eigen::VectorXd r(eqs);
        Complex nome(p(0), p(1)), rho(p(2), p(3));
        try {
            if (std::abs(nome) > 0.95) throw Error(ErrorKind::ConvergenceFailure, "nome out of range");
            for (std::size_t i = 0; i < fit_points.size(); ++i) {
                auto model = jacobi_ratios(fit_points[i], nome, rho);
                for (int k = 0; k < 3; ++k) {
                    Complex d = model[k] - data[i][k];
                    r(6 * i + 2 * k) = d.real();
                    r(6 * i + 2 * k + 1) = d.imag();
                }
            }
        } catch (const Error&) {
            r.setConstant(1e6);
        }
        for (Eigen::Index i = 0; i < eqs; ++i)
            if (!std::isfinite(r(i))) r(i) = 1e6;
        return r;
    };
    // Levenberg-Marquardt from a grid of starts.
    auto solve = [&](Eigen::Vector4d p) {
        Eigen::VectorXd r = residual(p);
        double cost = r.squaredNorm(), damping = 1e-3;
        for (int it = 0; it < 200 && cost > 1e-30; ++it) {
            Eigen::MatrixXd J(eqs, params);
            for (int k = 0; k < params; ++k) {
                Eigen::Vector4d h = Eigen::Vector4d::Zero();
                h(k) = 1e-7;
                J.col(k) = (residual(p + h) - residual(p - h)) / 2e-7;
            }
            Eigen::Matrix4d A = J.transpose() * J;
            Eigen::Vector4d g = J.transpose() * r;
            bool improved = false;
            for (int tries = 0; tries < 12 && !improved; ++tries) {
                Eigen::Matrix4d D = A;
                D.diagonal() *= 1 + damping;
                D.diagonal().array() += 1e-14;
                Eigen::Vector4d step = D.ldlt().solve(-g);
                Eigen::VectorXd rn = residual(p + step);
                if (rn.squaredNorm() < cost) {
                    p += step;
                    r = rn;
                    cost = rn.squaredNorm();
                    damping = std::max(damping / 10, 1e-12);
                    improved = true;
                } else {
                    damping *= 10;
                }
            }
            if (!improved) break;
        }
        return std::pair{p, cost};
    };
    Eigen::Vector4d best = Eigen::Vector4d::Zero();
    double best_cost = INFINITY;
    for (double nome : {0.1, 0.25, 0.4, 0.55, 0.7})
        for (double re : {0.0, 0.5})
            for (double im : {-1.2, -0.9, -0.6, -0.3, 0.3, 0.6, 0.9, 1.2}) {
                auto [p, cost] = solve(Eigen::Vector4d(nome, 0, re, im));
                if (cost < best_cost) {
                    best_cost = cost;
                    best = p;
                }
                if (best_cost < 1e-28) goto done;
            }
done:
    EllipticFit fit;
    fit.nome = Complex(best(0), best(1));
    fit.rho = Complex(best(2), best(3));
    fit.fit_residual = std::sqrt(best_cost);
    fit.fit_points = fit_points;
    fit.check_points = check_points;
    fit.deviations.assign(check_points.size(), INFINITY);
    // Independent check through the modulus: K by the AGM, Jacobi functions from k.
    Complex k = modulus_of_nome(fit.nome);
    Complex K = complete_K(k);
    auto check = [&](std::size_t i) {
        double u = check_points[i];
        auto got = elliptic_ratios(elliptic_R_product(eps, q, u, M, form));
        Complex w = K * u;
        Jacobi p = jacobi_elliptic(w + fit.rho, k), m = jacobi_elliptic(w - fit.rho, k);
        std::array<Complex, 3> model = {p.dn / m.dn, p.cn / m.cn, p.sn / m.sn};
        double dev = 0;
        for (int j = 0; j < 3; ++j) dev = std::max(dev, std::abs(model[j] - got[j]));
        fit.deviations[i] = dev;
    };
    std::size_t workers = std::max(1, std::min<int>(threads, int(check_points.size())));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < check_points.size(); i += workers) check(i);
        });
    for (auto& th : pool) th.join();
    fit.max_deviation = 0;
    for (double d : fit.deviations) fit.max_deviation = std::max(fit.max_deviation, d);
    return fit;
}

}  // namespace ybforge::classical
