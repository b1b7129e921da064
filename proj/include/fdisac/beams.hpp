// Copyright 2026 The fdisac Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Uniform linear array steering vectors and the discrete beam codebooks
// built from them. A codeword is the steering vector of a centered
// subarray; switching off the extreme elements widens the main lobe, and
// the surviving elements are rescaled so every codeword carries the same
// total power.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fdisac {

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// A uniform linear array laid out along a shared x axis.
///
/// `axis_offset_m` places the array center on the axis and
/// `broadside_offset_m` moves it off the axis; only the self-interference
/// geometry looks at either offset.
struct ArrayGeometry {
  int n_elements = 1;
  double element_spacing = 0.5;  // in wavelengths
  double axis_offset_m = 0.0;
  double broadside_offset_m = 0.0;

  void validate() const {
    if (n_elements < 1) {
      throw std::invalid_argument("ArrayGeometry: n_elements must be >= 1");
    }
    if (!(element_spacing > 0.0)) {
      throw std::invalid_argument("ArrayGeometry: element_spacing must be > 0");
    }
  }

  /// Element index k sits at ((-N+1)/2 + k) spacings from the array center.
  double element_position(int k) const {
    return (-(n_elements - 1) / 2.0 + k) * element_spacing;
  }
};

struct Codeword {
  int index = 0;
  double direction_deg = 0.0;
  double beamwidth_deg = 0.0;
  int n_active = 1;
  cvec weights;

  double power() const { return weights.squaredNorm(); }
};

/// Nominal beamwidth label and the number of centered elements left on to
/// produce it.
struct BeamwidthOption {
  double beamwidth_deg = 0.0;
  int n_active = 1;
};

struct Codebook {
  std::vector<Codeword> codewords;
  std::vector<double> directions;
  std::vector<BeamwidthOption> beamwidths;

  int size() const { return static_cast<int>(codewords.size()); }
  const Codeword& operator[](int i) const { return codewords.at(static_cast<std::size_t>(i)); }
  bool empty() const { return codewords.empty(); }
};

namespace detail {

inline void check_angle(double theta_deg, const char* what) {
  if (!(theta_deg > 0.0 && theta_deg < 180.0)) {
    throw std::invalid_argument(std::string(what) + ": angle must lie in (0, 180) degrees, got " +
                                std::to_string(theta_deg));
  }
}

inline std::complex<double> element_phasor(const ArrayGeometry& geometry, int k, double cos_theta) {
  const double phase = 2.0 * std::numbers::pi * geometry.element_position(k) * cos_theta;
  return std::polar(1.0, phase);
}

}  // namespace detail

/// Unit-norm array response a(theta) with element phases
/// 2*pi*spacing*((-N+1)/2 + k)*cos(theta).
inline cvec steering_vector(const ArrayGeometry& geometry, double theta_deg) {
  geometry.validate();
  detail::check_angle(theta_deg, "steering_vector");
  const double cos_theta = std::cos(deg_to_rad(theta_deg));
  const double scale = 1.0 / std::sqrt(static_cast<double>(geometry.n_elements));
  cvec a(geometry.n_elements);
  for (int k = 0; k < geometry.n_elements; ++k) {
    a(k) = scale * detail::element_phasor(geometry, k, cos_theta);
  }
  return a;
}

/// First active element of a centered subarray. When the number of
/// switched-off elements is odd the extra one is taken from the top.
inline int first_active_element(int n_elements, int n_active) {
  return (n_elements - n_active) / 2;
}

/// Codeword steered at `direction_deg` using the `n_active` central
/// elements; inactive entries are exactly zero and the squared norm equals
/// `power`. Active entries keep the full-array phase reference so the
/// weights stay phase-consistent with steering_vector().
inline Codeword make_codeword(const ArrayGeometry& geometry, double direction_deg, int n_active,
                              double power) {
  geometry.validate();
  detail::check_angle(direction_deg, "make_codeword");
  if (n_active < 1 || n_active > geometry.n_elements) {
    throw std::invalid_argument("make_codeword: n_active must lie in [1, n_elements]");
  }
  if (!(power > 0.0)) {
    throw std::invalid_argument("make_codeword: power must be > 0");
  }
  const double cos_theta = std::cos(deg_to_rad(direction_deg));
  const double amplitude = std::sqrt(power / static_cast<double>(n_active));
  Codeword cw;
  cw.direction_deg = direction_deg;
  cw.n_active = n_active;
  cw.weights = cvec::Zero(geometry.n_elements);
  const int first = first_active_element(geometry.n_elements, n_active);
  for (int k = first; k < first + n_active; ++k) {
    cw.weights(k) = amplitude * detail::element_phasor(geometry, k, cos_theta);
  }
  return cw;
}

/// Direction-major codebook: codeword index = direction_idx * B + beamwidth_idx.
inline Codebook build_codebook(const ArrayGeometry& geometry, const std::vector<double>& directions,
                               const std::vector<BeamwidthOption>& beamwidth_map, double power) {
  if (directions.empty()) {
    throw std::invalid_argument("build_codebook: directions must be nonempty");
  }
  if (beamwidth_map.empty()) {
    throw std::invalid_argument("build_codebook: beamwidth_map must be nonempty");
  }
  for (std::size_t i = 1; i < directions.size(); ++i) {
    if (directions[i] == directions[i - 1]) {
      throw std::invalid_argument("build_codebook: duplicate direction " +
                                  std::to_string(directions[i]));
    }
    if (directions[i] < directions[i - 1]) {
      throw std::invalid_argument("build_codebook: directions must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < beamwidth_map.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (beamwidth_map[i].beamwidth_deg == beamwidth_map[j].beamwidth_deg) {
        throw std::invalid_argument("build_codebook: duplicate beamwidth " +
                                    std::to_string(beamwidth_map[i].beamwidth_deg));
      }
    }
  }

  Codebook book;
  book.directions = directions;
  book.beamwidths = beamwidth_map;
  book.codewords.reserve(directions.size() * beamwidth_map.size());
  for (double direction : directions) {
    for (const BeamwidthOption& option : beamwidth_map) {
      Codeword cw = make_codeword(geometry, direction, option.n_active, power);
      cw.beamwidth_deg = option.beamwidth_deg;
      cw.index = static_cast<int>(book.codewords.size());
      book.codewords.push_back(std::move(cw));
    }
  }
  return book;
}

/// Array gain |a(theta)^H w|^2 of a weight vector towards theta.
inline double beam_gain(const ArrayGeometry& geometry, const cvec& weights, double theta_deg) {
  return std::norm(steering_vector(geometry, theta_deg).dot(weights));
}

// Defaults for the 8-element transmit and 16-element receive arrays. The
// beamwidth labels follow HPBW ~ 101.5 deg / n_active for half-wavelength
// spacing.

inline std::vector<double> default_directions() {
  std::vector<double> dirs;
  for (int d = 50; d <= 130; d += 5) dirs.push_back(static_cast<double>(d));
  return dirs;
}

inline std::vector<BeamwidthOption> default_tx_beamwidths() {
  return {{13.0, 8}, {17.0, 6}, {26.0, 4}, {60.0, 2}};
}

inline std::vector<BeamwidthOption> default_rx_beamwidths() {
  return {{6.0, 16}, {13.0, 8}, {17.0, 6}, {26.0, 4}};
}

}  // namespace fdisac
