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

// Propagation objects seen by the full-duplex base station: the downlink
// communication channel, the monostatic sensing channel and the direct
// transmit-to-receive self-interference (SI) channel.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "fdisac/beams.hpp"

namespace fdisac {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double wavelength_m(double carrier_ghz) { return kSpeedOfLight / (carrier_ghz * 1e9); }

struct CommChannelParams {
  double k_factor = 100.0;
  double los_angle_deg = 90.0;
  double distance_m = 60.0;
  double carrier_ghz = 41.0;
  double noise_power_dbw = -114.0;

  void validate() const {
    if (!(k_factor >= 0.0)) throw std::invalid_argument("CommChannelParams: k_factor must be >= 0");
    if (!(distance_m > 0.0)) throw std::invalid_argument("CommChannelParams: distance_m must be > 0");
    if (!(carrier_ghz > 0.0)) throw std::invalid_argument("CommChannelParams: carrier_ghz must be > 0");
  }
};

struct SensingParams {
  double target_angle_deg = 90.0;
  double reflection_coeff = 6e-4;
  double noise_power_dbw = -74.0;
  double sinr_threshold = 3.0;  // linear
  int min_sensing_slots = 1;

  void validate() const {
    if (!(reflection_coeff > 0.0)) {
      throw std::invalid_argument("SensingParams: reflection_coeff must be > 0");
    }
    if (!(sinr_threshold > 0.0)) {
      throw std::invalid_argument("SensingParams: sinr_threshold must be > 0");
    }
    if (min_sensing_slots < 0) {
      throw std::invalid_argument("SensingParams: min_sensing_slots must be >= 0");
    }
  }
};

/// Residual-SI factor known only up to |upsilon - nominal| <= radius.
struct SiUncertainty {
  double nominal = 0.0;
  double radius = 0.0;
  double cap = 1.0;

  void validate() const {
    if (!(nominal >= 0.0)) throw std::invalid_argument("SiUncertainty: nominal must be >= 0");
    if (!(radius >= 0.0)) throw std::invalid_argument("SiUncertainty: radius must be >= 0");
    if (nominal + radius > cap) {
      throw std::invalid_argument("SiUncertainty: nominal + radius exceeds cap");
    }
  }

  /// The worst case of the interval is its upper edge since nominal >= 0.
  double worst_case() const { return nominal + radius; }
};

struct ChannelSet {
  cvec h;
  cvec h_bar;  // h / sigma_com
  cmat steering_outer;  // A(theta), N_rx x N_tx
  cmat si_matrix;       // Q, N_rx x N_tx
  SensingParams sensing;
  SiUncertainty si;

  double sensing_noise_w() const { return db_to_linear(sensing.noise_power_dbw); }
};

/// Urban-macro large-scale path loss in dB with the distance in meters and
/// the carrier in GHz.
inline double uma_pathloss_db(double distance_m, double carrier_ghz) {
  if (!(distance_m > 0.0) || !(carrier_ghz > 0.0)) {
    throw std::invalid_argument("uma_pathloss_db: distance and carrier must be > 0");
  }
  return 28.0 + 22.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz);
}

/// Line-of-sight array response with unit-modulus entries, so that a
/// matched unit-power beam collects the full N_tx array gain.
inline cvec los_response(const ArrayGeometry& geometry, double beta_deg) {
  return steering_vector(geometry, beta_deg) * std::sqrt(static_cast<double>(geometry.n_elements));
}

/// Small-scale Rician fading v = sqrt(K/(K+1)) v_LoS + sqrt(1/(K+1)) v_NLoS
/// with v_NLoS ~ CN(0, I). E[||v||^2] = N_tx.
template <std::uniform_random_bit_generator Rng>
cvec rician_fading(const ArrayGeometry& geometry, const CommChannelParams& params, Rng& rng) {
  geometry.validate();
  params.validate();
  const double k = params.k_factor;
  const double los_weight = std::sqrt(k / (k + 1.0));
  const double nlos_weight = std::sqrt(1.0 / (k + 1.0));
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  const cvec los = los_response(geometry, params.los_angle_deg);
  cvec v(geometry.n_elements);
  for (int i = 0; i < geometry.n_elements; ++i) {
    const double re = component(rng);
    const double im = component(rng);
    v(i) = los_weight * los(i) + nlos_weight * std::complex<double>(re, im);
  }
  return v;
}

/// h = 10^(-PL_dB/20) * v.
template <std::uniform_random_bit_generator Rng>
cvec rician_channel(const ArrayGeometry& geometry, const CommChannelParams& params, Rng& rng) {
  const double amplitude = std::pow(10.0, -uma_pathloss_db(params.distance_m, params.carrier_ghz) / 20.0);
  return amplitude * rician_fading(geometry, params, rng);
}

/// A(theta) = a_rx(theta) a_tx(theta)^H; rank one with unit Frobenius norm.
inline cmat sensing_outer(const ArrayGeometry& tx, const ArrayGeometry& rx, double theta_deg) {
  return steering_vector(rx, theta_deg) * steering_vector(tx, theta_deg).adjoint();
}

/// Absolute position (meters) of an array element in the plane.
inline std::pair<double, double> element_location(const ArrayGeometry& geometry, int k, double lambda) {
  return {geometry.axis_offset_m + geometry.element_position(k) * lambda, geometry.broadside_offset_m};
}

/// Near-field SI channel
///   Q[m, n] = lambda / (4 pi d_mn) / sqrt(N_rx N_tx) * exp(-j 2 pi d_mn / lambda)
/// where d_mn is the distance between receive element m and transmit
/// element n.
inline cmat si_channel(const ArrayGeometry& tx, const ArrayGeometry& rx, double carrier_ghz) {
  tx.validate();
  rx.validate();
  if (!(carrier_ghz > 0.0)) throw std::invalid_argument("si_channel: carrier must be > 0");
  const double lambda = wavelength_m(carrier_ghz);
  const double norm = 1.0 / std::sqrt(static_cast<double>(rx.n_elements) * tx.n_elements);
  cmat q(rx.n_elements, tx.n_elements);
  for (int m = 0; m < rx.n_elements; ++m) {
    const auto [xr, yr] = element_location(rx, m, lambda);
    for (int n = 0; n < tx.n_elements; ++n) {
      const auto [xt, yt] = element_location(tx, n, lambda);
      const double d = std::hypot(xr - xt, yr - yt);
      if (!(d > 0.0)) {
        throw std::invalid_argument("si_channel: transmit and receive elements coincide");
      }
      q(m, n) = lambda / (4.0 * std::numbers::pi * d) * norm *
                std::polar(1.0, -2.0 * std::numbers::pi * d / lambda);
    }
  }
  return q;
}

/// R = upsilon * Q.
inline cmat residual_si(const cmat& q, double upsilon) {
  if (!(upsilon >= 0.0)) throw std::invalid_argument("residual_si: upsilon must be >= 0");
  return upsilon * q;
}

/// Assemble a ChannelSet; h_bar is h scaled by 1/sigma_com.
inline ChannelSet make_channel_set(cvec h, double comm_noise_dbw, const ArrayGeometry& tx,
                                   const ArrayGeometry& rx, double carrier_ghz,
                                   const SensingParams& sensing, const SiUncertainty& si) {
  sensing.validate();
  si.validate();
  if (h.size() != tx.n_elements) {
    throw std::invalid_argument("make_channel_set: h length differs from N_tx");
  }
  ChannelSet set;
  const double sigma_com = std::sqrt(db_to_linear(comm_noise_dbw));
  set.h_bar = h / sigma_com;
  set.h = std::move(h);
  set.steering_outer = sensing_outer(tx, rx, sensing.target_angle_deg);
  set.si_matrix = si_channel(tx, rx, carrier_ghz);
  set.sensing = sensing;
  set.si = si;
  return set;
}

/// splitmix64 finalizer, used to derive independent sub-seeds from a
/// master seed and a counter.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + counter);
}

}  // namespace fdisac
