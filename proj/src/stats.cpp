#include "sentvol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sentvol/specfun.hpp"

namespace sentvol {

namespace {

// Dense column-major helpers for the small regression designs (<= 7 columns).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// Cholesky solve of the normal equations; returns false when the Gram matrix
// is not numerically positive definite.
bool solve_normal_equations(const Matrix& design,
                            std::span<const double> target,
                            std::vector<double>& beta) {
    const std::size_t p = design.cols;
    std::vector<double> gram(p * p, 0.0);
    std::vector<double> moment(p, 0.0);
    for (std::size_t r = 0; r < design.rows; ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            const double di = design.at(r, i);
            moment[i] += di * target[r];
            for (std::size_t j = i; j < p; ++j) {
                gram[i * p + j] += di * design.at(r, j);
            }
        }
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        max_diag = std::max(max_diag, gram[i * p + i]);
    }
    const double tol = max_diag * 1e-11;

    std::vector<double> chol(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = gram[j * p + i];
            for (std::size_t m = 0; m < j; ++m) {
                sum -= chol[i * p + m] * chol[j * p + m];
            }
            if (i == j) {
                if (sum <= tol) return false;
                chol[i * p + i] = std::sqrt(sum);
            } else {
                chol[i * p + j] = sum / chol[j * p + j];
            }
        }
    }
    beta.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {  // L z = moment
        double sum = moment[i];
        for (std::size_t m = 0; m < i; ++m) sum -= chol[i * p + m] * beta[m];
        beta[i] = sum / chol[i * p + i];
    }
    for (std::size_t ii = p; ii-- > 0;) {  // L^T beta = z
        double sum = beta[ii];
        for (std::size_t m = ii + 1; m < p; ++m) {
            sum -= chol[m * p + ii] * beta[m];
        }
        beta[ii] = sum / chol[ii * p + ii];
    }
    return true;
}

// Column-pivoted Householder QR least squares, the fallback route for
// ill-conditioned designs. Throws on rank deficiency.
std::vector<double> solve_qr_pivoted(Matrix design,
                                     std::vector<double> target) {
    const std::size_t n = design.rows;
    const std::size_t p = design.cols;
    std::vector<std::size_t> perm(p);
    for (std::size_t j = 0; j < p; ++j) perm[j] = j;

    std::vector<double> col_norm(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            col_norm[j] += design.at(r, j) * design.at(r, j);
        }
    }
    double max_r = 0.0;
    for (std::size_t step = 0; step < p; ++step) {
        std::size_t pivot = step;
        for (std::size_t j = step + 1; j < p; ++j) {
            if (col_norm[j] > col_norm[pivot]) pivot = j;
        }
        if (pivot != step) {
            for (std::size_t r = 0; r < n; ++r) {
                std::swap(design.a[r * p + step], design.a[r * p + pivot]);
            }
            std::swap(col_norm[step], col_norm[pivot]);
            std::swap(perm[step], perm[pivot]);
        }
        double norm = 0.0;
        for (std::size_t r = step; r < n; ++r) {
            norm += design.at(r, step) * design.at(r, step);
        }
        norm = std::sqrt(norm);
        if (step == 0) max_r = norm;
        if (!(norm > max_r * 1e-12)) {
            throw std::runtime_error("collinear lags in regression design");
        }
        if (design.at(step, step) > 0) norm = -norm;
        std::vector<double> v(n - step);
        v[0] = design.at(step, step) - norm;
        for (std::size_t r = step + 1; r < n; ++r) {
            v[r - step] = design.at(r, step);
        }
        double vtv = 0.0;
        for (const double value : v) vtv += value * value;
        if (vtv > 0.0) {
            for (std::size_t j = step; j < p; ++j) {
                double dot = 0.0;
                for (std::size_t r = step; r < n; ++r) {
                    dot += v[r - step] * design.at(r, j);
                }
                const double scale = 2.0 * dot / vtv;
                for (std::size_t r = step; r < n; ++r) {
                    design.at(r, j) -= scale * v[r - step];
                }
            }
            double dot = 0.0;
            for (std::size_t r = step; r < n; ++r) {
                dot += v[r - step] * target[r];
            }
            const double scale = 2.0 * dot / vtv;
            for (std::size_t r = step; r < n; ++r) {
                target[r] -= scale * v[r - step];
            }
        }
        for (std::size_t j = step + 1; j < p; ++j) {
            col_norm[j] -= design.at(step, j) * design.at(step, j);
        }
    }
    std::vector<double> beta(p, 0.0);
    for (std::size_t ii = p; ii-- > 0;) {
        double sum = target[ii];
        for (std::size_t j = ii + 1; j < p; ++j) {
            sum -= design.at(ii, j) * beta[j];
        }
        beta[ii] = sum / design.at(ii, ii);
    }
    std::vector<double> unpermuted(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) unpermuted[perm[j]] = beta[j];
    return unpermuted;
}

}  // namespace

CorrelationResult pearson(std::span<const double> x,
                          std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson: length mismatch");
    }
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson: need n >= 3");

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::invalid_argument(
            "pearson: undefined correlation (zero variance)");
    }

    CorrelationResult out;
    out.n = static_cast<int>(n);
    // Cauchy-Schwarz equality marks an exact linear relation; handling it
    // explicitly keeps r at +-1 instead of a square-root rounding wobble.
    if (sxy * sxy >= sxx * syy) {
        out.r = sxy > 0 ? 1.0 : -1.0;
        out.p_value = 0.0;
        return out;
    }
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(n - 2);
    // Two-sided p for t = r.sqrt(df/(1-r^2)) collapses to
    // I_{1-r^2}(df/2, 1/2).
    out.p_value = reg_incomplete_beta(df / 2.0, 0.5, 1.0 - out.r * out.r);
    return out;
}

std::string_view to_string(SentimentDim d) {
    switch (d) {
        case SentimentDim::negative: return "negative";
        case SentimentDim::positive: return "positive";
        case SentimentDim::neutral: return "neutral";
        case SentimentDim::aggregate: return "aggregate";
    }
    return "aggregate";
}

std::string_view to_string(MarketTarget t) {
    return t == MarketTarget::returns ? "returns" : "volatility";
}

double sentiment_value(const DailySentiment& day, SentimentDim dim) {
    switch (dim) {
        case SentimentDim::negative: return day.mean_neg;
        case SentimentDim::positive: return day.mean_pos;
        case SentimentDim::neutral: return day.mean_neu;
        case SentimentDim::aggregate: return day.sentd;
    }
    return day.sentd;
}

CorrelationResult lagged_correlation(std::span<const DailySentiment> sentiment,
                                     const MarketSeries& market,
                                     SentimentDim dim, MarketTarget target,
                                     int lag) {
    if (lag != 0 && lag != 1) {
        throw std::invalid_argument("lagged_correlation: lag must be 0 or 1");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& day : sentiment) {
        const auto it = std::lower_bound(market.dates.begin(),
                                         market.dates.end(), day.trading_day);
        if (it == market.dates.end() || *it != day.trading_day) continue;
        const std::size_t idx =
            static_cast<std::size_t>(it - market.dates.begin()) +
            static_cast<std::size_t>(lag);
        if (target == MarketTarget::returns) {
            const std::size_t offset = market.return_index_offset();
            if (idx < offset || idx - offset >= market.returns.size()) continue;
            ys.push_back(market.returns[idx - offset]);
        } else {
            const std::size_t offset = market.vol_index_offset();
            if (idx < offset || idx - offset >= market.volatility.size()) {
                continue;
            }
            ys.push_back(market.volatility[idx - offset]);
        }
        xs.push_back(sentiment_value(day, dim));
    }
    if (xs.size() < 3) {
        throw std::invalid_argument(
            "lagged_correlation: insufficient overlap after alignment");
    }
    CorrelationResult out = pearson(xs, ys);
    out.lag = lag;
    return out;
}

OlsFit ols_lags(std::span<const double> y, std::span<const double> x, int k,
                bool include_x) {
    if (k < 1) throw std::invalid_argument("lag order must be >= 1");
    if (include_x && x.size() != y.size()) {
        throw std::invalid_argument("granger: length mismatch");
    }
    const std::size_t t_len = y.size();
    const auto lag = static_cast<std::size_t>(k);
    if (t_len <= lag) throw std::invalid_argument("series shorter than lags");
    const std::size_t rows = t_len - lag;
    const std::size_t cols = 1 + lag + (include_x ? lag : 0);
    if (rows <= cols) {
        throw std::invalid_argument("too few observations for lag order");
    }

    Matrix design{rows, cols, std::vector<double>(rows * cols)};
    std::vector<double> target(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + lag;
        target[r] = y[t];
        design.at(r, 0) = 1.0;
        for (std::size_t j = 1; j <= lag; ++j) {
            design.at(r, j) = y[t - j];
        }
        if (include_x) {
            for (std::size_t j = 1; j <= lag; ++j) {
                design.at(r, lag + j) = x[t - j];
            }
        }
    }

    OlsFit fit;
    fit.lag_order = k;
    fit.t_eff = static_cast<int>(rows);
    if (!solve_normal_equations(design, target, fit.coefficients)) {
        fit.coefficients = solve_qr_pivoted(design, target);
    }
    double rss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double fitted = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            fitted += design.at(r, c) * fit.coefficients[c];
        }
        const double resid = target[r] - fitted;
        rss += resid * resid;
    }
    fit.rss = rss;
    return fit;
}

GrangerResult granger_test(std::span<const double> x,
                           std::span<const double> y, int k) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("granger_test: length mismatch");
    }
    const OlsFit restricted = ols_lags(y, x, k, false);
    const OlsFit unrestricted = ols_lags(y, x, k, true);
    const int df_denom = unrestricted.t_eff - 2 * k - 1;
    if (df_denom < 1) {
        throw std::invalid_argument("granger_test: series too short for lags");
    }

    GrangerResult out;
    out.lag = k;
    const double rss_gain = std::max(0.0, restricted.rss - unrestricted.rss);
    if (unrestricted.rss <= 0.0) {
        out.f_stat = std::numeric_limits<double>::infinity();
        out.p_value = 0.0;
        return out;
    }
    out.f_stat = (rss_gain / k) / (unrestricted.rss / df_denom);
    out.p_value = 1.0 - f_cdf(out.f_stat, k, df_denom);
    return out;
}

}  // namespace sentvol
