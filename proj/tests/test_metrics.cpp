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

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fdisac/metrics.hpp"
#include "test_support.hpp"

namespace fdisac {
namespace {

using testing::random_instance;
using testing::rel_err;

// Default arrays, target at 90 degrees, matched full-aperture beams.
struct Defaults {
  ArrayGeometry tx{8, 0.5};
  ArrayGeometry rx{16, 0.5, 0.15};
  Codebook tx_book = build_codebook(tx, default_directions(), default_tx_beamwidths(), 1.0);
  Codebook rx_book = build_codebook(rx, default_directions(), default_rx_beamwidths(), 0.25);

  ChannelSet channels(cvec h, double nominal = 0.0, double radius = 0.0, double threshold = 3.0) const {
    SensingParams s;
    s.sinr_threshold = threshold;
    return make_channel_set(std::move(h), -114.0, tx, rx, 41.0, s, {nominal, radius, 1.0});
  }

  // Direction-major: 90 deg is direction 8, first beamwidth is the widest aperture.
  static constexpr int kTx90 = 8 * 4;
  static constexpr int kRx90 = 8 * 4;
};

cvec los_channel() {
  CommChannelParams p;
  p.k_factor = 1e12;
  std::mt19937_64 rng(1);
  return rician_channel({8, 0.5}, p, rng);
}

TEST(CommRate, ZeroChannelCarriesNothing) {
  const Defaults d;
  EXPECT_EQ(comm_rate_bits(cvec::Zero(8), d.tx_book[0], 200e6, 1e-3), 0.0);
}

TEST(CommRate, LosLinkBudget) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const double bits = comm_rate_bits(ch.h_bar, d.tx_book[Defaults::kTx90], 200e6, 1e-3);
  const double snr = 1.0 * 8.0 * std::pow(10.0, (114.0 - uma_pathloss_db(60.0, 41.0)) / 10.0);
  EXPECT_NEAR(bits, 200e6 * 1e-3 * std::log2(1.0 + snr), 1e-6 * bits);
  EXPECT_NEAR(bits, 1.57e6, 0.02 * 1.57e6);
}

TEST(CommRate, RejectsBadArguments) {
  const Defaults d;
  EXPECT_THROW(comm_rate_bits(cvec::Zero(8), d.tx_book[0], 0.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(comm_rate_bits(cvec::Zero(4), d.tx_book[0], 1.0, 1e-3), std::invalid_argument);
}

TEST(SensingSinr, MatchedBeamsLinkBudget) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const double sinr = sensing_sinr(ch, d.tx_book[Defaults::kTx90], d.rx_book[Defaults::kRx90], 0.0);
  const double want = (6e-4 * 6e-4 * 0.25 * 1.0) / (db_to_linear(-74.0) * 0.25);
  EXPECT_NEAR(sinr, want, 1e-9 * want);
  EXPECT_NEAR(sinr, 9.04, 0.01);
}

TEST(SensingSinr, NoReturnMeansZero) {
  const Defaults d;
  ChannelSet ch = d.channels(los_channel());
  ch.sensing.reflection_coeff = 0.0;
  EXPECT_EQ(sensing_sinr(ch, d.tx_book[Defaults::kTx90], d.rx_book[Defaults::kRx90], 0.3), 0.0);
}

TEST(SensingSinr, DecreasesWithResidualSi) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const Codeword& t = d.tx_book[Defaults::kTx90 + 3];
  const Codeword& r = d.rx_book[Defaults::kRx90 + 3];
  EXPECT_LT(sensing_sinr(ch, t, r, 0.8), sensing_sinr(ch, t, r, 0.4));
}

TEST(SensingSinr, NonSensingSlotIsAnError) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  EXPECT_THROW(sensing_sinr(ch, d.tx_book, d.rx_book, SlotAssignment::comm_only(0), 0.0), std::invalid_argument);
  EXPECT_THROW(robust_sinr_feasible(ch, d.tx_book, d.rx_book, SlotAssignment::idle()), std::invalid_argument);
}

TEST(SensingSinr, AgreesWithLoopOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = random_instance(seed);
    for (int b = 0; b < inst.tx.size(); ++b) {
      for (int c = 0; c < inst.rx.size(); ++c) {
        const double fast = sensing_sinr(inst.channels, inst.tx[b], inst.rx[c], 0.7);
        const double slow = testing::sinr_by_loops(inst.channels, inst.tx[b], inst.rx[c], 0.7);
        EXPECT_LT(rel_err(fast, slow), 1e-10);
      }
    }
  }
}

TEST(RobustFeasibility, ZeroUncertaintyMatchesThreshold) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = random_instance(seed);
    inst.channels.si = {0.0, 0.0, 1.0};
    for (int b = 0; b < inst.tx.size(); ++b) {
      for (int c = 0; c < inst.rx.size(); ++c) {
        const double sinr = sensing_sinr(inst.channels, inst.tx[b], inst.rx[c], 0.0);
        if (std::abs(sinr - inst.channels.sensing.sinr_threshold) < 1e-9) continue;  // knife edge
        EXPECT_EQ(robust_sinr_feasible(inst.channels, inst.tx[b], inst.rx[c]),
                  sinr >= inst.channels.sensing.sinr_threshold);
      }
    }
  }
}

TEST(RobustFeasibility, ImpliesThresholdOverTheWholeInterval) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto inst = random_instance(seed);
    const double lo = std::max(0.0, inst.channels.si.nominal - inst.channels.si.radius);
    const double hi = inst.channels.si.worst_case();
    for (int b = 0; b < inst.tx.size(); ++b) {
      for (int c = 0; c < inst.rx.size(); ++c) {
        if (!robust_sinr_feasible(inst.channels, inst.tx[b], inst.rx[c])) continue;
        ++checked;
        for (int k = 0; k < 100; ++k) {
          const double u = lo + (hi - lo) * k / 99.0;
          EXPECT_GE(sensing_sinr(inst.channels, inst.tx[b], inst.rx[c], u),
                    inst.channels.sensing.sinr_threshold * (1 - 1e-12));
        }
      }
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(RobustFeasibility, HugeThresholdIsNeverMet) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel(), 0.0, 0.0, 1e30);
  for (int b = 0; b < d.tx_book.size(); b += 5)
    for (int c = 0; c < d.rx_book.size(); c += 5) EXPECT_FALSE(robust_sinr_feasible(ch, d.tx_book[b], d.rx_book[c]));
}

TEST(RobustFeasibility, MonotoneInThresholdAndUncertainty) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(seed);
    for (int b = 0; b < inst.tx.size(); ++b) {
      for (int c = 0; c < inst.rx.size(); ++c) {
        bool was = true;
        for (double scale : {1.0, 1.5, 2.0, 4.0}) {
          ChannelSet ch = inst.channels;
          ch.sensing.sinr_threshold *= scale;
          const bool now = robust_sinr_feasible(ch, inst.tx[b], inst.rx[c]);
          EXPECT_FALSE(now && !was);
          was = now;
        }
        was = true;
        for (double extra : {0.0, 0.05, 0.1, 0.2}) {
          ChannelSet ch = inst.channels;
          ch.si.nominal = std::min(ch.si.nominal + extra, 1.0 - ch.si.radius);
          const bool now = robust_sinr_feasible(ch, inst.tx[b], inst.rx[c]);
          EXPECT_FALSE(now && !was);
          was = now;
        }
      }
    }
  }
}

TEST(WorstCase, AttainedAtUpperEdge) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(seed);
    const double lo = std::max(0.0, inst.channels.si.nominal - inst.channels.si.radius);
    const double hi = inst.channels.si.worst_case();
    for (int b = 0; b < inst.tx.size(); ++b) {
      for (int c = 0; c < inst.rx.size(); ++c) {
        const double worst = worst_case_sinr(inst.channels, inst.tx[b], inst.rx[c]);
        for (int k = 0; k < 100; ++k) {
          const double u = lo + (hi - lo) * k / 99.0;
          EXPECT_LE(worst, sensing_sinr(inst.channels, inst.tx[b], inst.rx[c], u) * (1 + 1e-12));
        }
      }
    }
  }
}

TEST(RxNorm, SelectedCodewordNormIsTheOneHotSum) {
  const Defaults d;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> pick(0, d.rx_book.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int chosen = pick(rng);
    double sum = 0.0;
    for (int c = 0; c < d.rx_book.size(); ++c) sum += d.rx_book[c].weights.squaredNorm() * (c == chosen ? 1.0 : 0.0);
    EXPECT_EQ(d.rx_book[chosen].weights.squaredNorm(), sum);
  }
}

TEST(EvaluateSchedule, IdleWithoutSensingRequirement) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const auto eval = evaluate_schedule(ch, d.tx_book, d.rx_book, Schedule(3), 200e6, 1e-3, 0, 3);
  EXPECT_TRUE(eval.feasible);
  EXPECT_EQ(eval.total_bits, 0.0);
  EXPECT_TRUE(eval.violated_tag.empty());
}

TEST(EvaluateSchedule, IdleWithSensingRequirementNamesC13) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const auto eval = evaluate_schedule(ch, d.tx_book, d.rx_book, Schedule(3), 200e6, 1e-3, 1, 3);
  EXPECT_FALSE(eval.feasible);
  EXPECT_EQ(eval.violated_tag, "C13");
}

TEST(EvaluateSchedule, SingleSharedSlot) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const Schedule s{SlotAssignment::shared(Defaults::kTx90, Defaults::kRx90)};
  const auto eval = evaluate_schedule(ch, d.tx_book, d.rx_book, s, 200e6, 1e-3, 1, 1);
  EXPECT_TRUE(eval.feasible);
  EXPECT_NEAR(eval.total_bits, 1.6e6, 0.15 * 1.6e6);
  EXPECT_NEAR(eval.worst_case_sinr[0], 9.04, 0.01);
}

TEST(EvaluateSchedule, MalformedSlotsNameTheirConstraint) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const Schedule no_tx{SlotAssignment{true, false, std::nullopt, std::nullopt}};
  EXPECT_EQ(evaluate_schedule(ch, d.tx_book, d.rx_book, no_tx, 200e6, 1e-3, 0, 1).violated_tag, "C6");
  const Schedule no_rx{SlotAssignment{true, true, 0, std::nullopt}};
  EXPECT_EQ(evaluate_schedule(ch, d.tx_book, d.rx_book, no_rx, 200e6, 1e-3, 0, 1).violated_tag, "C9");
  const Schedule out_of_range{SlotAssignment::comm_only(999)};
  EXPECT_EQ(evaluate_schedule(ch, d.tx_book, d.rx_book, out_of_range, 200e6, 1e-3, 0, 1).violated_tag, "C6");
  EXPECT_THROW(evaluate_schedule(ch, d.tx_book, d.rx_book, Schedule(2), 200e6, 1e-3, 0, 1), std::invalid_argument);
}

TEST(EvaluateSchedule, WeakSensingPairNamesC12) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel(), 0.0, 0.0, 100.0);
  const Schedule s{SlotAssignment::shared(Defaults::kTx90, Defaults::kRx90)};
  const auto eval = evaluate_schedule(ch, d.tx_book, d.rx_book, s, 200e6, 1e-3, 1, 1);
  EXPECT_FALSE(eval.feasible);
  EXPECT_EQ(eval.violated_tag, "C12");
  EXPECT_EQ(eval.violated_slot, 0);
}

TEST(EvaluateSchedule, SenseOnlySlotsCarryNoBits) {
  const Defaults d;
  const ChannelSet ch = d.channels(los_channel());
  const Schedule s{SlotAssignment::sense_only(Defaults::kTx90, Defaults::kRx90),
                   SlotAssignment::comm_only(Defaults::kTx90)};
  const auto eval = evaluate_schedule(ch, d.tx_book, d.rx_book, s, 200e6, 1e-3, 1, 2);
  EXPECT_TRUE(eval.feasible);
  EXPECT_DOUBLE_EQ(eval.total_bits, comm_rate_bits(ch.h_bar, d.tx_book[Defaults::kTx90], 200e6, 1e-3));
  EXPECT_TRUE(std::isnan(eval.worst_case_sinr[1]));
}

}  // namespace
}  // namespace fdisac
