#include "eos/diag_regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "eos/error.hpp"

namespace eos::diag_regression {

namespace {

void validate_w0(const RegressionProblem& p) {
    if (p.w0.size() != 2 * p.d())
        throw DomainError("w0 must have length 2d");
    for (int i = 0; i < p.w0.size(); ++i)
        if (p.w0[i] == 0.0)
            throw DomainError("invalid initialization: w0 must be element-wise nonzero");
}

}  // namespace

Eigen::VectorXd beta_of_theta(const Eigen::VectorXd& theta) {
    const int d = static_cast<int>(theta.size()) / 2;
    Eigen::VectorXd beta(d);
    for (int i = 0; i < d; ++i)
        beta[i] = theta[i] * theta[i] - theta[i + d] * theta[i + d];
    return beta;
}

double model_loss(const RegressionProblem& p, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd r = p.X * beta_of_theta(theta) - p.y;
    return r.squaredNorm() / (2.0 * p.n());
}

Eigen::VectorXd model_gradient(const RegressionProblem& p, const Eigen::VectorXd& theta) {
    const int d = p.d();
    const Eigen::VectorXd r = p.X * beta_of_theta(theta) - p.y;
    const Eigen::VectorXd xr = p.X.transpose() * r / p.n();
    Eigen::VectorXd g(2 * d);
    for (int i = 0; i < d; ++i) {
        g[i] = 2.0 * theta[i] * xr[i];
        g[i + d] = -2.0 * theta[i + d] * xr[i];
    }
    return g;
}

LossGradHess model_loss_grad_hess(const RegressionProblem& p, const Eigen::VectorXd& theta) {
    const int d = p.d();
    const int n = p.n();
    LossGradHess out;
    const Eigen::VectorXd r = p.X * beta_of_theta(theta) - p.y;
    out.loss = r.squaredNorm() / (2.0 * n);
    const Eigen::VectorXd xr = p.X.transpose() * r / n;
    out.grad.resize(2 * d);
    for (int i = 0; i < d; ++i) {
        out.grad[i] = 2.0 * theta[i] * xr[i];
        out.grad[i + d] = -2.0 * theta[i + d] * xr[i];
    }
    // Gram term (4/N) diag(theta) [[G, -G], [-G, G]] diag(theta), plus the
    // residual curvature 2 diag([X^T r; -X^T r]) / N.
    const Eigen::MatrixXd g = p.X.transpose() * p.X * (4.0 / n);
    out.hess.resize(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double gij = g(i, j);
            out.hess(i, j) = theta[i] * gij * theta[j];
            out.hess(i, j + d) = -theta[i] * gij * theta[j + d];
            out.hess(i + d, j) = -theta[i + d] * gij * theta[j];
            out.hess(i + d, j + d) = theta[i + d] * gij * theta[j + d];
        }
        out.hess(i, i) += 2.0 * xr[i];
        out.hess(i + d, i + d) += -2.0 * xr[i];
    }
    return out;
}

Eigen::VectorXd theta_gd_step(const RegressionProblem& p, const Eigen::VectorXd& theta,
                              double eta) {
    return theta - eta * model_gradient(p, theta);
}

GfsBeta gfs_beta(const RegressionProblem& p, const Eigen::VectorXd* nu0) {
    validate_w0(p);
    const int d = p.d();
    const int n = p.n();

    // k_i = 16 u_{+,0,i}^2 u_{-,0,i}^2; beta_i(nu) = (sqrt(k_i)/2) *
    // sinh(2 (X^T nu)_i + c_i) with c_i = arcsinh(2 beta_{0,i} / sqrt(k_i)).
    Eigen::VectorXd sqrt_k(d);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) {
        const double m = std::fabs(p.w0[i] * p.w0[i + d]);
        sqrt_k[i] = 4.0 * m;
        const double beta0 = p.w0[i] * p.w0[i] - p.w0[i + d] * p.w0[i + d];
        c[i] = std::asinh(2.0 * beta0 / sqrt_k[i]);
    }

    auto beta_of_nu = [&](const Eigen::VectorXd& nu) {
        const Eigen::VectorXd t = p.X.transpose() * nu;
        Eigen::VectorXd beta(d);
        for (int i = 0; i < d; ++i) beta[i] = 0.5 * sqrt_k[i] * std::sinh(2.0 * t[i] + c[i]);
        return beta;
    };

    Eigen::VectorXd nu = nu0 ? *nu0 : Eigen::VectorXd::Zero(n);
    Eigen::VectorXd beta = beta_of_nu(nu);
    Eigen::VectorXd f = p.X * beta - p.y;
    double fnorm = f.norm();
    const double feas_target = 1e-12 * (1.0 + p.y.norm());

    constexpr int kMaxIters = 200;
    for (int it = 0; it < kMaxIters && fnorm > feas_target; ++it) {
        // J = X diag(d beta / d t) X^T with d beta_i / d t_i =
        // sqrt(k_i) cosh(.) = sqrt(k_i + 4 beta_i^2), overflow-free.
        Eigen::VectorXd slope(d);
        for (int i = 0; i < d; ++i)
            slope[i] = std::sqrt(sqrt_k[i] * sqrt_k[i] + 4.0 * beta[i] * beta[i]);
        const Eigen::MatrixXd j = p.X * slope.asDiagonal() * p.X.transpose();
        const Eigen::VectorXd step = j.ldlt().solve(-f);

        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd nu_try = nu + alpha * step;
            const Eigen::VectorXd beta_try = beta_of_nu(nu_try);
            if (beta_try.allFinite()) {
                const Eigen::VectorXd f_try = p.X * beta_try - p.y;
                const double fn_try = f_try.norm();
                if (fn_try < fnorm * (1.0 - 1e-4 * alpha) || fn_try < feas_target) {
                    nu = nu_try;
                    beta = beta_try;
                    f = f_try;
                    fnorm = fn_try;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw SolverError("gfs_beta: Newton line search exhausted", fnorm);
    }
    if (fnorm > 1e-8 * (1.0 + p.y.norm()))
        throw SolverError("gfs_beta: Newton did not reach feasibility", fnorm);

    // Stationarity residual: grad Q(beta)_i = 0.5 (arcsinh(2 beta_i / sqrt(k_i)) - c_i)
    // must equal (X^T nu)_i.
    const Eigen::VectorXd t = p.X.transpose() * nu;
    Eigen::VectorXd stat(d);
    double grad_norm = 0.0;
    for (int i = 0; i < d; ++i) {
        const double gq = 0.5 * (std::asinh(2.0 * beta[i] / sqrt_k[i]) - c[i]);
        stat[i] = gq - t[i];
        grad_norm += gq * gq;
    }
    grad_norm = std::sqrt(grad_norm);

    GfsBeta out;
    out.beta = beta;
    out.dual = nu;
    const double feas_rel = fnorm / (1.0 + p.y.norm());
    const double stat_rel = stat.norm() / (1.0 + grad_norm);
    out.kkt_residual = std::max(feas_rel, stat_rel);
    return out;
}

Eigen::VectorXd theta_from_beta(const RegressionProblem& p, const Eigen::VectorXd& beta) {
    const int d = p.d();
    Eigen::VectorXd theta(2 * d);
    for (int i = 0; i < d; ++i) {
        const double m = std::fabs(p.w0[i] * p.w0[i + d]);  // conserved |u_+ u_-|
        const double s = std::hypot(beta[i], 2.0 * m);
        double up2;
        double um2;
        if (beta[i] >= 0.0) {
            up2 = 0.5 * (beta[i] + s);
            um2 = up2 > 0.0 ? (m * m) / up2 : 0.0;
        } else {
            um2 = 0.5 * (-beta[i] + s);
            up2 = um2 > 0.0 ? (m * m) / um2 : 0.0;
        }
        theta[i] = std::sqrt(up2);
        theta[i + d] = std::sqrt(um2);
    }
    return theta;
}

double interpolating_sharpness(const RegressionProblem& p, const Eigen::VectorXd& theta) {
    const int d = p.d();
    // lambda_max of the Gram Hessian equals lambda_max of the N x N matrix
    // (4/N) X diag(u_+^2 + u_-^2) X^T.
    Eigen::VectorXd t2(d);
    for (int i = 0; i < d; ++i) t2[i] = theta[i] * theta[i] + theta[i + d] * theta[i + d];
    const Eigen::MatrixXd m = p.X * t2.asDiagonal() * p.X.transpose() * (4.0 / p.n());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double gfs_sharpness_regression(const RegressionProblem& p, const Eigen::VectorXd& w) {
    RegressionProblem traj = p;
    traj.w0 = w;
    const GfsBeta gb = gfs_beta(traj);
    return interpolating_sharpness(p, theta_from_beta(traj, gb.beta));
}

double flattest_sharpness(const RegressionProblem& p, int iters, Rng& rng) {
    const int d = p.d();
    const int n = p.n();
    const Eigen::MatrixXd xxt = p.X * p.X.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(xxt);
    auto project = [&](const Eigen::VectorXd& b) {
        return (b - p.X.transpose() * llt.solve(p.X * b - p.y)).eval();
    };

    // lambda(beta) with the magnitude-minimal lift theta^2 = |beta| depends
    // on |beta| only: (4/N) lambda_max(X diag(|beta|) X^T).
    auto value_and_grad = [&](const Eigen::VectorXd& beta, Eigen::VectorXd* grad) {
        const Eigen::MatrixXd m = p.X * beta.cwiseAbs().asDiagonal() * p.X.transpose() * (4.0 / n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        const double lam = es.eigenvalues()[n - 1];
        if (grad) {
            const Eigen::VectorXd v = es.eigenvectors().col(n - 1);
            const Eigen::VectorXd xv = p.X.transpose() * v;
            grad->resize(d);
            for (int i = 0; i < d; ++i) {
                const double s = beta[i] > 0.0 ? 1.0 : (beta[i] < 0.0 ? -1.0 : 0.0);
                (*grad)[i] = (4.0 / n) * xv[i] * xv[i] * s;
            }
        }
        return lam;
    };

    double best = std::numeric_limits<double>::infinity();
    constexpr int kRestarts = 3;
    for (int r = 0; r < kRestarts; ++r) {
        Eigen::VectorXd seed = Eigen::VectorXd::Zero(d);
        if (r > 0)
            for (int i = 0; i < d; ++i) seed[i] = rng.normal(0.0, 0.1);
        Eigen::VectorXd beta = project(seed);
        Eigen::VectorXd grad;
        double lam = value_and_grad(beta, &grad);
        best = std::min(best, lam);
        const int steps = std::max(1, iters / kRestarts);
        const double scale = std::max(beta.norm(), 1e-8);
        for (int k = 0; k < steps; ++k) {
            const double gn = grad.norm();
            if (gn < 1e-14) break;
            const double alpha = 0.1 * scale / (gn * std::sqrt(k + 1.0));
            beta = project(beta - alpha * grad);
            lam = value_and_grad(beta, &grad);
            best = std::min(best, lam);
        }
    }
    return best;
}

RegressionProblem make_synthetic(int d, int n, double init_scale, Rng& rng) {
    RegressionProblem p;
    p.X.resize(n, d);
    const double sd = std::sqrt(5.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) p.X(r, c) = 5.0 + sd * rng.normal();
    p.y.resize(n);
    for (int r = 0; r < n; ++r) p.y[r] = rng.normal();
    p.w0.resize(2 * d);
    for (int i = 0; i < 2 * d; ++i) {
        double v = 0.0;
        while (std::fabs(v) < 1e-3 * init_scale) v = rng.normal(0.0, init_scale);
        p.w0[i] = v;
    }
    return p;
}

flow_integrator::LossOracle regression_oracle(const RegressionProblem& p) {
    flow_integrator::LossOracle o;
    o.dimension = 2 * p.d();
    o.value = [p](const Eigen::VectorXd& t) { return model_loss(p, t); };
    o.gradient = [p](const Eigen::VectorXd& t) { return model_gradient(p, t); };
    o.hvp = [p](const Eigen::VectorXd& t, const Eigen::VectorXd& v) {
        return (model_loss_grad_hess(p, t).hess * v).eval();
    };
    return o;
}

}  // namespace eos::diag_regression
