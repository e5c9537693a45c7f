#pragma once

#include "omega/levy_model.hpp"

// shared unit-scale fixtures used across the test binaries
namespace fx {

inline omega::LevyModel base_model(double sigma = 0.2, double eta = 4.0) {
    return {0.18, sigma, {{{0.25, eta}}}};
}

// weak clock penalty, log utility -> mild regime
inline omega::Preferences mild_prefs() { return {0.18, 0.003, 0.3568, 0.0, 1.0}; }

// strong clock penalty; wide allowance -> severe / high tolerance
inline omega::Preferences severe_high_prefs() { return {0.18, 1.0, 1.8, 0.0, 1.0}; }

// strong clock penalty; tight allowance -> severe / low tolerance
inline omega::Preferences severe_low_prefs() { return {0.18, 1.0, 0.3568, 0.0, 1.0}; }

// comparative-statics center point (rho = 0.25)
inline omega::Preferences bench_prefs() { return {0.18, 1.0, 0.3568, 0.25, 1.0}; }

} // namespace fx
