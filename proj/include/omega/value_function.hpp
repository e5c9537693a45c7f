#pragma once

#include <optional>
#include <vector>

#include "omega/thresholds.hpp"
#include "omega/trailing.hpp"

namespace omega {

enum class Action { Hold, SellTakeProfit, SellStopLoss, SellTrailingStop };
enum class Region { Continuation, S1, S2, S3 };

struct StateLabel {
    Action action = Action::Hold;
    Region active_region = Region::Continuation;
    RegimeKind regime = RegimeKind::Mild;
    bool sell() const { return action != Action::Hold; }
};

const char* action_name(Action a);
const char* region_name(Region r);

// stop-now floor: optimal value when the clock runs permanently (rate r+q)
double v_lower(const ThresholdEngine& eng, double x);

// value of the fixed-clock-level problem at level y
double v_bar(const ThresholdEngine& eng, double x, double y);

// Full value surface V(x, s; c) on the half-plane x <= s, assembled from the
// regime's piecewise formula. Prices enter as logs on the original scale; a
// transaction-cost factor K > 1 (risk-neutral only) is handled by solving the
// unit problem in shifted coordinates.
class ValueSurface {
public:
    ValueSurface(const LevyModel& m, const Preferences& p, SolveControls sctl = {},
                 TrailingControls tctl = {});

    const ThresholdEngine& engine() const { return eng_; }
    const ThresholdSet& thresholds_unit() const { return ts_; }
    ThresholdSet thresholds() const { return ts_.shifted(log_k_); }
    const std::optional<TrailingCurve>& trailing_unit() const { return trail_; }
    RegimeKind kind() const { return ts_.kind; }
    double log_k() const { return log_k_; }
    const Preferences& prefs() const { return prefs_; }
    const LevyModel& model() const { return model_; }

    double value(double x, double s) const;
    StateLabel classify(double x, double s) const;

    // unit-scale versions (x' = x - log K), used internally and by tests
    double value_unit(double x, double s) const;
    StateLabel classify_unit(double x, double s) const;

    struct GridPoint {
        double x, s, value;
        StateLabel label;
    };
    // row-major sweep of the window intersected with {x <= s}
    std::vector<GridPoint> region_grid(double xmin, double xmax, double smin,
                                       double smax, int n) const;

private:
    LevyModel model_;
    Preferences prefs_;
    double log_k_;
    ThresholdEngine eng_;
    ThresholdSet ts_;
    std::optional<TrailingCurve> trail_;
    double v_diag_sc_ = 0.0; // V(s_c, s_c; c), reused by the lowest band
};

} // namespace omega
