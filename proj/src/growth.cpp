#include "chemostat/growth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace chemostat {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

std::string name(const char* field, std::size_t i) { return std::string(field) + std::to_string(i + 1); }

constexpr double kFdStep = 1e-6;

// Central difference, forward difference near the lower boundary of [0, inf).
template <class F>
double fd_derivative(F&& f, double v) {
    const double h = kFdStep * std::max(1.0, std::abs(v));
    if (v >= h) return (f(v + h) - f(v - h)) / (2.0 * h);
    return (f(v + h) - f(v)) / h;
}

}  // namespace

void BioParams::validate() const {
    for (std::size_t i = 0; i < 2; ++i) {
        require(std::isfinite(m[i]) && m[i] > 0.0, name("m", i) + " must be positive");
        require(std::isfinite(K[i]) && K[i] > 0.0, name("K", i) + " must be positive");
        require(std::isfinite(beta[i]) && beta[i] >= 0.0, name("beta", i) + " must be nonnegative");
        require(std::isfinite(death[i]) && death[i] >= 0.0, name("a", i) + " must be nonnegative");
        require(std::isfinite(alpha[i]) && alpha[i] >= 0.0 && alpha[i] <= 1.0,
                name("alpha", i) + " must lie in [0, 1]");
        require(alpha[i] > 0.0 || death[i] > 0.0,
                name("alpha", i) + " and " + name("a", i) + " cannot both vanish");
        require(std::isfinite(yield[i]) && yield[i] > 0.0 && yield[i] <= 1.0,
                name("Y", i) + " must lie in (0, 1]");
    }
}

double removal_rate(Species i, double D, const BioParams& p) {
    return p.alpha[index(i)] * D + p.death[index(i)];
}

double GrowthModel::d_substrate(Species i, double S, double x_other) const {
    return fd_derivative([&](double s) { return rate(i, s, x_other); }, S);
}

double GrowthModel::d_other(Species i, double S, double x_other) const {
    return fd_derivative([&](double x) { return rate(i, S, x); }, x_other);
}

namespace {

double monod_rate(Species i, double S, double x_other, const BioParams& p) {
    const auto k = index(i);
    return p.m[k] * S / (p.K[k] + S + p.beta[k] * x_other);
}

RatePartials monod_partials(Species i, double S, double x_other, const BioParams& p) {
    const auto k = index(i);
    const double den = p.K[k] + S + p.beta[k] * x_other;
    const double den2 = den * den;
    return {p.m[k] * (p.K[k] + p.beta[k] * x_other) / den2, -p.m[k] * S * p.beta[k] / den2};
}

void check_arguments(double S, double x_other, const BioParams& p) {
    p.validate();
    require(S >= 0.0 && x_other >= 0.0, "S and x must be nonnegative");
}

}  // namespace

double monod_inhibition(Species i, double S, double x_other, const BioParams& p) {
    check_arguments(S, x_other, p);
    return monod_rate(i, S, x_other, p);
}

RatePartials monod_inhibition_partials(Species i, double S, double x_other, const BioParams& p) {
    check_arguments(S, x_other, p);
    return monod_partials(i, S, x_other, p);
}

MonodInhibition::MonodInhibition(const BioParams& p) : params_(p) { params_.validate(); }

double MonodInhibition::rate(Species i, double S, double x_other) const {
    return monod_rate(i, S, x_other, params_);
}

double MonodInhibition::d_substrate(Species i, double S, double x_other) const {
    return monod_partials(i, S, x_other, params_).dS;
}

double MonodInhibition::d_other(Species i, double S, double x_other) const {
    return monod_partials(i, S, x_other, params_).dX;
}

double MonodInhibition::sup_rate(Species i) const { return params_.m[index(i)]; }

YieldRescaled::YieldRescaled(std::shared_ptr<const GrowthModel> original, std::array<double, 2> yield)
    : original_(std::move(original)), yield_(yield) {
    require(original_ != nullptr, "growth model is null");
    for (std::size_t i = 0; i < 2; ++i) {
        require(std::isfinite(yield_[i]) && yield_[i] > 0.0 && yield_[i] <= 1.0,
                name("Y", i) + " must lie in (0, 1]");
    }
}

double YieldRescaled::rate(Species i, double S, double x_other) const {
    return yield_[index(i)] * original_->rate(i, S, yield_[index(other(i))] * x_other);
}

double YieldRescaled::d_substrate(Species i, double S, double x_other) const {
    return yield_[index(i)] * original_->d_substrate(i, S, yield_[index(other(i))] * x_other);
}

double YieldRescaled::d_other(Species i, double S, double x_other) const {
    const double y_other = yield_[index(other(i))];
    return yield_[index(i)] * y_other * original_->d_other(i, S, y_other * x_other);
}

double YieldRescaled::sup_rate(Species i) const { return yield_[index(i)] * original_->sup_rate(i); }

std::shared_ptr<const GrowthModel> rescale_from_yields(std::shared_ptr<const GrowthModel> original,
                                                       const BioParams& p) {
    return std::make_shared<YieldRescaled>(std::move(original), p.yield);
}

Model Model::monod(const BioParams& p) {
    p.validate();
    std::shared_ptr<const GrowthModel> mu = std::make_shared<MonodInhibition>(p);
    if (!p.unit_yields()) mu = rescale_from_yields(std::move(mu), p);
    return Model{std::move(mu), p};
}

}  // namespace chemostat
