// SPDX-License-Identifier: Apache-2.0
//
// gfdmsim: semi-blind multiuser SIMO GFDM link simulation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GFDMSIM_HARNESS_HPP
#define GFDMSIM_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfdmsim/config.hpp"
#include "gfdmsim/detector.hpp"
#include "gfdmsim/estimator.hpp"

namespace gfdmsim {

/// Everything derived once from a campaign configuration.
struct CampaignContext {
    CampaignConfig config;
    ModulationMatrix modulation;
    AssignmentPlan plan;
    PilotLayout pilots;
    SubspaceDims dims;
};

/// Validates the configuration, builds the plan and rejects infeasible or
/// image-aliasing layouts with ConfigError.
CampaignContext prepare_campaign(const CampaignConfig& cfg);

SubcarrierSets make_subcarrier_sets(const CampaignConfig& cfg);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t child_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial_index);

/// Noise variance for a measured signal power; 0 for an infinite SNR.
double noise_variance(double signal_power, double snr_db);

/// One drawn frame: impairments, QPSK data (pilots and nulls in symbol 0) and noise.
ReceivedFrame draw_trial_frame(const CampaignContext& ctx, double snr_db, std::uint64_t seed);

double mse_cfo(const std::vector<double>& phi_hat, const std::vector<double>& phi_true);

double mse_channel_iq(const std::vector<CVector>& hi_hat, const std::vector<CVector>& hq_hat,
                      const std::vector<UserImpairment>& truth);
double mse_channel_iq(const EstimationResult& result, const std::vector<UserImpairment>& truth);

/// Bit error rate over symbols 1..N_s-1 (symbol 0 carries pilots and nulls).
double bit_error_rate(const StackedZfDetector& detector, const ReceivedFrame& frame);

struct TrialRecord {
    double snr_db = 0.0;
    int trial = 0;
    Mode mode = Mode::Jcciqe;
    double mse_cfo = 0.0;
    double mse_channel_iq = 0.0;
    double ber = 0.0;
    bool outage = false;
    std::optional<double> crlb_cfo;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    bool failed = false;
    std::string error;
};

/// Fraction of non-failed records with ber > threshold.
double outage_probability(const std::vector<TrialRecord>& records, double threshold);

/// All configured modes for one (snr, trial) pair, sharing one drawn frame.
std::vector<TrialRecord> run_trial(const CampaignContext& ctx, std::size_t snr_index, int trial);

struct SummaryRow {
    double snr_db = 0.0;
    Mode mode = Mode::Jcciqe;
    int trials = 0;
    int failed = 0;
    double mse_cfo = 0.0;
    double mse_channel_iq = 0.0;
    double ber = 0.0;
    double outage_probability = 0.0;
    std::optional<double> crlb_cfo;
};

struct CampaignResult {
    std::vector<TrialRecord> records; // ordered by snr, trial, mode
    std::vector<SummaryRow> summary;  // ordered by snr, mode
    int failed_trials = 0;
    int total_trials = 0;

    [[nodiscard]] bool failure_threshold_exceeded() const { return failed_trials * 10 > total_trials; }
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, const CampaignConfig& cfg);

CampaignResult run_campaign(const CampaignConfig& cfg);

void write_trials_csv(std::ostream& out, const CampaignResult& result);
void write_summary_csv(std::ostream& out, const CampaignResult& result);

struct CostCurvePoint {
    double phi = 0.0;
    std::vector<double> cost; // one per user
};

struct CostCurve {
    std::vector<double> phi_true;
    std::vector<CostCurvePoint> points;
};

/// Samples cfo_cost for every user on the frame of (snr_index, trial).
CostCurve cost_curve(const CampaignContext& ctx, std::size_t snr_index, int trial, double step);

} // namespace gfdmsim

#endif // GFDMSIM_HARNESS_HPP
