#include "stein/test_function.hpp"

#include <cmath>

#include "stein/errors.hpp"

namespace stein {

namespace {

double fd_step(const Vector& x, const FdSpec& fd) {
  return fd.h_scale * (1.0 + x.norm());
}

void check_levels(double delta, double scale, const FdSpec& fd,
                  const char* what) {
  if (!fd.check) return;
  if (delta > fd.instability_tol * std::max(scale, 1.0))
    throw DerivativeUnstable(std::string(what) +
                             ": Richardson levels disagree by " +
                             std::to_string(delta));
}

Vector grad_once(const TestFunction::Eval& f, const Vector& x, double h) {
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Matrix hess_once(const TestFunction::Eval& f, const Vector& x, double h) {
  const int d = static_cast<int>(x.size());
  Matrix hm(d, d);
  const double f0 = f(x);
  Vector xt = x;
  for (int i = 0; i < d; ++i) {
    xt[i] = x[i] + h;
    const double fp = f(xt);
    xt[i] = x[i] - h;
    const double fm = f(xt);
    xt[i] = x[i];
    hm(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      xt[i] = x[i] + h;
      xt[j] = x[j] + h;
      const double fpp = f(xt);
      xt[j] = x[j] - h;
      const double fpm = f(xt);
      xt[i] = x[i] - h;
      const double fmm = f(xt);
      xt[j] = x[j] + h;
      const double fmp = f(xt);
      xt[i] = x[i];
      xt[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hm(i, j) = v;
      hm(j, i) = v;
    }
  return hm;
}

}  // namespace

Vector fd_gradient(const TestFunction::Eval& f, const Vector& x, const FdSpec& fd) {
  const double h = fd_step(x, fd);
  const Vector d1 = grad_once(f, x, h);
  if (!fd.richardson) return d1;
  const Vector d2 = grad_once(f, x, 0.5 * h);
  check_levels((d2 - d1).norm(), std::max(d1.norm(), d2.norm()), fd,
               "fd_gradient");
  return (4.0 * d2 - d1) / 3.0;
}

Matrix fd_hessian(const TestFunction::Eval& f, const Vector& x, const FdSpec& fd) {
  const double h = fd_step(x, fd);
  const Matrix d1 = hess_once(f, x, h);
  if (!fd.richardson) return d1;
  const Matrix d2 = hess_once(f, x, 0.5 * h);
  check_levels((d2 - d1).norm(), std::max(d1.norm(), d2.norm()), fd,
               "fd_hessian");
  return (4.0 * d2 - d1) / 3.0;
}

double fd_directional(const TestFunction::Eval& f, const Vector& x,
                      const std::vector<Vector>& dirs, double h) {
  // 2^k stencil: sum over sign patterns of f(x + h * sum_i s_i u_i).
  const int k = static_cast<int>(dirs.size());
  if (k == 0) return f(x);
  double acc = 0.0;
  const int patterns = 1 << k;
  Vector point(x.size());
  for (int mask = 0; mask < patterns; ++mask) {
    point = x;
    int parity = 0;
    for (int i = 0; i < k; ++i) {
      const bool plus = mask & (1 << i);
      point += (plus ? h : -h) * dirs[i];
      parity += plus ? 0 : 1;
    }
    acc += ((parity % 2) ? -1.0 : 1.0) * f(point);
  }
  return acc / std::pow(2.0 * h, k);
}

Vector TestFunction::gradient(const Vector& x) const {
  if (grad_) return grad_(x);
  return fd_gradient(eval_, x, fd);
}

Matrix TestFunction::hessian(const Vector& x) const {
  if (hess_) return hess_(x);
  return fd_hessian(eval_, x, fd);
}

TestFunction make_linear(const Vector& a) {
  const int d = static_cast<int>(a.size());
  TestFunction f("linear", d, [a](const Vector& x) { return a.dot(x); });
  f.with_gradient([a](const Vector&) { return a; })
      .with_hessian([d](const Vector&) { return Matrix::Zero(d, d); })
      .with_seminorms({std::nullopt, a.norm(), 0.0, 0.0, 0.0})
      .with_gaussian_mean([](const GaussianLaw&) { return 0.0; });
  return f;
}

TestFunction make_quadratic_cross(int dim, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= dim || j >= dim)
    throw ConfigInvalid("make_quadratic_cross: bad index pair");
  TestFunction f("quadratic", dim,
                 [i, j](const Vector& x) { return x[i] * x[j]; });
  f.with_gradient([dim, i, j](const Vector& x) {
     Vector g = Vector::Zero(dim);
     g[i] = x[j];
     g[j] = x[i];
     return g;
   })
      .with_hessian([dim, i, j](const Vector&) {
        Matrix h = Matrix::Zero(dim, dim);
        h(i, j) = 1.0;
        h(j, i) = 1.0;
        return h;
      })
      .with_seminorms({std::nullopt, std::nullopt, 1.0, 0.0, M_SQRT2})
      .with_gaussian_mean([i, j](const GaussianLaw& law) {
        return law.covariance().mat()(i, j);
      });
  return f;
}

TestFunction make_quadratic_form(const Matrix& a) {
  const Matrix s = SymMatrix(a).mat();
  const int d = static_cast<int>(s.rows());
  TestFunction f("quadratic_form", d,
                 [s](const Vector& x) { return x.dot(s * x); });
  f.with_gradient([s](const Vector& x) { return Vector(2.0 * (s * x)); })
      .with_hessian([s](const Vector&) { return Matrix(2.0 * s); })
      .with_seminorms({std::nullopt, std::nullopt, 2.0 * operator_norm(s), 0.0,
                       2.0 * hs_norm(s)})
      .with_gaussian_mean([s](const GaussianLaw& law) {
        return hs_inner(s, law.covariance().mat());
      });
  return f;
}

TestFunction make_cos(const Vector& a) {
  const int d = static_cast<int>(a.size());
  const double na = a.norm();
  TestFunction f("cos", d, [a](const Vector& x) { return std::cos(a.dot(x)); });
  f.with_gradient([a](const Vector& x) { return Vector(-std::sin(a.dot(x)) * a); })
      .with_hessian([a](const Vector& x) {
        return Matrix(-std::cos(a.dot(x)) * (a * a.transpose()));
      })
      .with_seminorms({1.0, na, na * na, na * na * na, na * na})
      .with_gaussian_mean([a](const GaussianLaw& law) {
        return std::exp(-0.5 * a.dot(law.covariance().mat() * a));
      });
  return f;
}

double gauss_bump_m3() {
  const double r2 = 6.0 - 2.0 * std::sqrt(6.0);
  const double r = std::sqrt(r2);
  return (0.75 * r - r * r2 / 8.0) * std::exp(-0.25 * r2);
}

TestFunction make_gauss_bump(int dim) {
  TestFunction f("gauss_bump", dim, [](const Vector& x) {
    return std::exp(-0.25 * x.squaredNorm());
  });
  f.with_gradient([](const Vector& x) {
     return Vector(-0.5 * std::exp(-0.25 * x.squaredNorm()) * x);
   })
      .with_hessian([dim](const Vector& x) {
        const double e = std::exp(-0.25 * x.squaredNorm());
        return Matrix(e * (0.25 * (x * x.transpose()) -
                           0.5 * Matrix::Identity(dim, dim)));
      })
      .with_seminorms({1.0, std::exp(-0.5) * M_SQRT1_2, 0.5, gauss_bump_m3(),
                       0.5 * std::sqrt(static_cast<double>(dim))})
      .with_gaussian_mean([dim](const GaussianLaw& law) {
        const Matrix m =
            Matrix::Identity(dim, dim) + 0.5 * law.covariance().mat();
        return 1.0 / std::sqrt(m.determinant());
      });
  return f;
}

}  // namespace stein
