#ifndef CHEMOSTAT_GROWTH_HPP
#define CHEMOSTAT_GROWTH_HPP

/**
 * @file growth.hpp
 * @brief Growth-rate laws for the two-species interspecific density-dependent
 *        chemostat, removal rates, and the yield rescaling.
 *
 * A growth law f_i(S, x_j) gives the specific growth rate of species i as a
 * function of substrate S and the concentration of its competitor x_j.
 * Every law used by the library must satisfy
 *   - f_i(0, x) = 0 for all x >= 0,
 *   - df_i/dS > 0 and df_i/dx_j < 0 for S > 0, x_j > 0.
 */

#include <array>
#include <cstddef>
#include <memory>

#include "chemostat/errors.hpp"

namespace chemostat {

enum class Species : int { first = 0, second = 1 };

constexpr Species other(Species s) {
    return s == Species::first ? Species::second : Species::first;
}

constexpr std::size_t index(Species s) { return static_cast<std::size_t>(s); }

/// Species number as printed in reports (1 or 2).
constexpr int number(Species s) { return static_cast<int>(s) + 1; }

/**
 * @brief Biological constants of the Monod-with-inhibition model.
 *
 * Arrays are indexed by species (index(Species::first) == 0). Default values
 * are the reference parameter set used throughout the project.
 */
struct BioParams {
    std::array<double, 2> m{4.0, 2.2};      ///< maximum growth rates [1/time]
    std::array<double, 2> K{1.5, 2.0};      ///< half-saturation constants [concentration]
    std::array<double, 2> beta{1.2, 0.1};   ///< inhibition by the competitor [1/concentration]
    std::array<double, 2> alpha{0.2, 0.5};  ///< retention decoupling coefficients in [0, 1]
    std::array<double, 2> death{0.8, 0.2};  ///< death rates a_i [1/time]
    std::array<double, 2> yield{1.0, 1.0};  ///< yield coefficients in (0, 1]

    /// Throws ParameterError when any invariant is violated.
    void validate() const;

    bool unit_yields() const { return yield[0] == 1.0 && yield[1] == 1.0; }

    bool operator==(const BioParams&) const = default;
};

/// Removal rate D_i = alpha_i * D + a_i.
double removal_rate(Species i, double D, const BioParams& p);

struct RatePartials {
    double dS;  ///< derivative with respect to substrate
    double dX;  ///< derivative with respect to the competitor concentration
};

/**
 * @brief Abstract pair of growth rates f_1(S, x_2), f_2(S, x_1).
 *
 * Implementations only need rate() and sup_rate(). The default partial
 * derivatives are central differences with step 1e-6 scaled by magnitude,
 * switching to a forward difference within one step of the S = 0 or x = 0
 * boundary.
 */
class GrowthModel {
  public:
    virtual ~GrowthModel() = default;

    virtual double rate(Species i, double S, double x_other) const = 0;
    virtual double d_substrate(Species i, double S, double x_other) const;
    virtual double d_other(Species i, double S, double x_other) const;

    /// lim_{S -> inf} rate(i, S, 0); may be +infinity.
    virtual double sup_rate(Species i) const = 0;

    RatePartials partials(Species i, double S, double x_other) const {
        return {d_substrate(i, S, x_other), d_other(i, S, x_other)};
    }
};

/// f_i(S, x_j) = m_i S / (K_i + S + beta_i x_j).
double monod_inhibition(Species i, double S, double x_other, const BioParams& p);
RatePartials monod_inhibition_partials(Species i, double S, double x_other, const BioParams& p);

class MonodInhibition final : public GrowthModel {
  public:
    explicit MonodInhibition(const BioParams& p);

    double rate(Species i, double S, double x_other) const override;
    double d_substrate(Species i, double S, double x_other) const override;
    double d_other(Species i, double S, double x_other) const override;
    double sup_rate(Species i) const override;

  private:
    BioParams params_;
};

/**
 * @brief Growth pair in rescaled variables x_i = X_i / Y_i.
 *
 * Wraps rates mu_i(S, X_j) written in the original biomass variables:
 *   f_1(S, x_2) = Y_1 mu_1(S, Y_2 x_2),  f_2(S, x_1) = Y_2 mu_2(S, Y_1 x_1).
 */
class YieldRescaled final : public GrowthModel {
  public:
    YieldRescaled(std::shared_ptr<const GrowthModel> original, std::array<double, 2> yield);

    double rate(Species i, double S, double x_other) const override;
    double d_substrate(Species i, double S, double x_other) const override;
    double d_other(Species i, double S, double x_other) const override;
    double sup_rate(Species i) const override;

  private:
    std::shared_ptr<const GrowthModel> original_;
    std::array<double, 2> yield_;
};

/// Throws ParameterError unless both yields lie in (0, 1].
std::shared_ptr<const GrowthModel> rescale_from_yields(std::shared_ptr<const GrowthModel> original,
                                                       const BioParams& p);

/**
 * @brief A growth pair together with the constants that set removal rates.
 *
 * All analysis routines take a Model; it is immutable and cheap to copy.
 */
struct Model {
    std::shared_ptr<const GrowthModel> growth;
    BioParams params;

    /// Monod-with-inhibition model; applies the yield rescaling when yields differ from 1.
    static Model monod(const BioParams& p = {});

    double rate(Species i, double S, double x_other) const { return growth->rate(i, S, x_other); }
    double removal(Species i, double D) const { return removal_rate(i, D, params); }
};

}  // namespace chemostat

#endif  // CHEMOSTAT_GROWTH_HPP
