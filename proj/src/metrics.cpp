#include "burstgate/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "burstgate/errors.hpp"

namespace burstgate {

double ie_eff(double ppl_percent, const EModelParams& p) {
    return p.ie + (95.0 - p.ie) * ppl_percent / (ppl_percent + p.bpl);
}

double id_delay(double one_way_delay_ms) {
    const double d = one_way_delay_ms;
    double id = 0.024 * d;
    if (d > 177.3) id += 0.11 * (d - 177.3);
    return id;
}

double r_factor(double ppl_percent, double one_way_delay_ms, const EModelParams& p) {
    const double r = p.r0 - p.is_impairment - id_delay(one_way_delay_ms) -
                     ie_eff(ppl_percent, p) + p.advantage;
    return std::clamp(r, 0.0, 100.0);
}

double mos_from_r(double r) {
    if (r <= 0) return 1.0;
    if (r >= 100) return 4.5;
    // The raw cubic dips slightly below 1 for r < 6.52 (its derivative is
    // negative up to r ~ 3.2); the scale has no meaning below 1, so floor it.
    const double mos = 1.0 + 0.035 * r + 7e-6 * r * (r - 60.0) * (100.0 - r);
    return mos < 1.0 ? 1.0 : mos;
}

const char* to_string(QualityBand band) {
    switch (band) {
    case QualityBand::best: return "best";
    case QualityBand::high: return "high";
    case QualityBand::medium: return "medium";
    case QualityBand::low: return "low";
    case QualityBand::poor: return "poor";
    }
    return "?";
}

QualityBand quality_band(double mos) {
    if (mos >= 4.34) return QualityBand::best;
    if (mos >= 4.03) return QualityBand::high;
    if (mos >= 3.60) return QualityBand::medium;
    if (mos >= 3.10) return QualityBand::low;
    return QualityBand::poor;
}

std::vector<CallScore> voip_mos_per_iteration(const std::vector<IterationResult>& results,
                                              double network_delay_ms, const EModelParams& p) {
    if (results.empty())
        throw ConfigError("no iteration results to score");
    bool any_voip = false;
    for (const auto& st : results.front().per_flow)
        if (st.kind == FlowKind::voip) any_voip = true;
    if (!any_voip)
        throw NoVoipFlows();

    std::vector<CallScore> scores;
    for (const auto& r : results) {
        for (const auto& st : r.per_flow) {
            if (st.kind != FlowKind::voip) continue;
            CallScore c;
            c.iteration = r.iteration;
            c.flow_id = st.flow_id;
            c.loss_percent = 100.0 * st.loss_rate();
            c.one_way_delay_ms =
                network_delay_ms + 1000.0 * st.mean_queue_delay_s() + p.codec_delay_ms;
            c.mos = mos_from_r(r_factor(c.loss_percent, c.one_way_delay_ms, p));
            scores.push_back(c);
        }
    }
    return scores;
}

Histogram histogram(const std::vector<double>& samples, const std::vector<double>& edges) {
    if (edges.size() < 2)
        throw BadEdges("need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i]))
            throw BadEdges("edges must be strictly increasing");

    Histogram h;
    h.edges = edges;
    h.counts.assign(edges.size() - 1, 0);
    for (double x : samples) {
        if (x < edges.front()) {
            h.underflow += 1;
        } else if (x >= edges.back()) {
            h.overflow += 1;
        } else {
            const auto it = std::upper_bound(edges.begin(), edges.end(), x);
            h.counts[std::size_t(it - edges.begin()) - 1] += 1;
        }
    }
    return h;
}

std::vector<double> uniform_edges(double lo, double hi, double step) {
    if (!(step > 0) || !(hi > lo))
        throw BadEdges("need hi > lo and step > 0");
    const auto n = std::size_t(std::llround((hi - lo) / step));
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i < n; ++i) edges[i] = lo + double(i) * step;
    edges[n] = hi;
    return edges;
}

std::vector<double> default_loss_edges() {
    // 0 .. 5% of loss rate in 0.25% bins, built from integer ratios so the
    // emitted bin boundaries print as clean decimals.
    std::vector<double> edges(21);
    for (int i = 0; i <= 20; ++i) edges[i] = double(25 * i) / 10000.0;
    return edges;
}

std::vector<double> default_mos_edges() {
    // 1.0 .. 4.5 in 0.05 steps.
    std::vector<double> edges(71);
    for (int i = 0; i <= 70; ++i) edges[i] = double(100 + 5 * i) / 100.0;
    return edges;
}

std::vector<MosCdfPoint> mos_cdf(const std::vector<IterationResult>& results,
                                 const std::vector<double>& delay_sweep_ms,
                                 const EModelParams& p) {
    if (delay_sweep_ms.empty())
        throw ConfigError("delay sweep must have at least one value");

    std::vector<MosCdfPoint> curve;
    curve.reserve(delay_sweep_ms.size() * 351);
    for (double delay : delay_sweep_ms) {
        auto scores = voip_mos_per_iteration(results, delay, p);
        std::vector<double> mos(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) mos[i] = scores[i].mos;
        std::sort(mos.begin(), mos.end());
        // Grid 1.00 .. 4.50 in hundredths; P(MOS >= x) falls out of the
        // sorted sample by binary search.
        for (int i = 0; i <= 350; ++i) {
            const double x = double(100 + i) / 100.0;
            const auto at_least = mos.end() - std::lower_bound(mos.begin(), mos.end(), x);
            curve.push_back({delay, x, double(at_least) / double(mos.size())});
        }
    }
    return curve;
}

} // namespace burstgate
