#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace bypass {

/// Hyperparameters omega = (a, b, epsilon) with their floors and the
/// aggressiveness C_omega used when they are adapted online.
struct HyperParams {
  static constexpr std::size_t kCount = 3;
  static constexpr std::array<std::string_view, kCount> kNames{"a", "b", "epsilon"};

  double a = 1000.0;
  double b = 1.0;
  double epsilon = 1.25;
  std::array<double, kCount> omega_min{1e-8, 1e-8, 1e-8};
  double c_omega = 1e-3;

  std::array<double, kCount> omega() const { return {a, b, epsilon}; }
  void set_omega(const std::array<double, kCount>& w) {
    a = w[0];
    b = w[1];
    epsilon = w[2];
  }

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  /// validate() plus omega >= omega_min, required when omega is adapted.
  void validate_floors() const;
};

}  // namespace bypass
