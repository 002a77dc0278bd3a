#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "burstgate/engine.hpp"

namespace burstgate {

/// E-model constants. Defaults are the recommendation's own: base rating
/// 93.2, G.729A equipment impairment 11 with loss robustness 19, and a 25 ms
/// encode/packetize/jitter-buffer allowance added by the VoIP pipeline.
struct EModelParams {
    double r0 = 93.2;
    double is_impairment = 0.0;
    double advantage = 0.0;
    double ie = 11.0;
    double bpl = 19.0;
    double codec_delay_ms = 25.0;
};

/// Effective equipment impairment under random packet loss:
/// ie + (95 − ie)·ppl/(ppl + bpl).
double ie_eff(double ppl_percent, const EModelParams& p = {});

/// Simplified delay impairment: 0.024·d, plus 0.11·(d − 177.3) beyond
/// 177.3 ms.
double id_delay(double one_way_delay_ms);

/// Transmission rating R = r0 − Is − Id − Ie,eff + A, clamped to [0, 100].
double r_factor(double ppl_percent, double one_way_delay_ms, const EModelParams& p = {});

/// Standard cubic R→MOS mapping onto [1, 4.5].
double mos_from_r(double r);

enum class QualityBand { best, high, medium, low, poor };

const char* to_string(QualityBand band);

/// Band partition of the MOS scale: best [4.34, 4.5], high [4.03, 4.34),
/// medium [3.60, 4.03), low [3.10, 3.60), poor below.
QualityBand quality_band(double mos);

/// One scored VoIP call in one iteration.
struct CallScore {
    std::uint32_t iteration = 0;
    std::uint32_t flow_id = 0;
    double loss_percent = 0.0;
    double one_way_delay_ms = 0.0;
    double mos = 1.0;
};

/// Score every VoIP flow of every iteration at one network delay. The
/// one-way delay is network delay + that call's measured mean queue delay +
/// the codec allowance; loss is the call's own whole-run loss rate.
/// Throws NoVoipFlows when the scenario had none.
std::vector<CallScore> voip_mos_per_iteration(const std::vector<IterationResult>& results,
                                              double network_delay_ms,
                                              const EModelParams& p = {});

struct Histogram {
    std::vector<double> edges;        // strictly increasing, ≥ 2
    std::vector<std::uint64_t> counts; // counts.size() == edges.size() − 1
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;
};

/// Half-open binning [eᵢ, eᵢ₊₁); samples outside the edge span land in
/// underflow/overflow. Throws BadEdges on a malformed edge list.
Histogram histogram(const std::vector<double>& samples, const std::vector<double>& edges);

/// Uniform edge builder: lo, lo+step, … through hi (inclusive within a half
/// step of rounding).
std::vector<double> uniform_edges(double lo, double hi, double step);

/// Default report binnings: loss 0–5% in 0.25% bins, MOS 1.0–4.5 in 0.05
/// steps.
std::vector<double> default_loss_edges();
std::vector<double> default_mos_edges();

struct MosCdfPoint {
    double delay_ms = 0.0;
    double mos = 0.0;        // grid point x
    double probability = 0.0; // P(call MOS ≥ x)
};

/// Complementary-cumulative MOS curves, one per swept network delay, on the
/// fixed grid 1.00, 1.01, …, 4.50. Within one delay the curve is
/// non-increasing in x; across delays it is pointwise non-increasing.
std::vector<MosCdfPoint> mos_cdf(const std::vector<IterationResult>& results,
                                 const std::vector<double>& delay_sweep_ms,
                                 const EModelParams& p = {});

} // namespace burstgate
