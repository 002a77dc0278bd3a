#include "burstgate/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "burstgate/errors.hpp"
#include "burstgate/scenario.hpp"

namespace burstgate {

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string per_iteration_csv(const std::vector<IterationResult>& results) {
    std::string out = "iteration,flow_id,kind,sent,delivered,dropped,residual,loss_rate,"
                      "mean_queue_delay_s\n";
    for (const auto& r : results) {
        for (const auto& st : r.per_flow) {
            out += std::to_string(r.iteration);
            out += ',';
            out += std::to_string(st.flow_id);
            out += ',';
            out += to_string(st.kind);
            out += ',';
            out += std::to_string(st.sent);
            out += ',';
            out += std::to_string(st.delivered);
            out += ',';
            out += std::to_string(st.dropped);
            out += ',';
            out += std::to_string(st.residual);
            out += ',';
            out += format_double(st.loss_rate());
            out += ',';
            out += format_double(st.mean_queue_delay_s());
            out += '\n';
        }
    }
    return out;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out += format_double(h.edges[i]);
        out += ',';
        out += format_double(h.edges[i + 1]);
        out += ',';
        out += std::to_string(h.counts[i]);
        out += '\n';
    }
    return out;
}

std::string mos_cdf_csv(const std::vector<MosCdfPoint>& curve) {
    std::string out = "delay_ms,mos,probability\n";
    for (const auto& pt : curve) {
        out += format_double(pt.delay_ms);
        out += ',';
        out += format_double(pt.mos);
        out += ',';
        out += format_double(pt.probability);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "value,flow_id,mean_loss_rate,std_loss_rate\n";
    for (const auto& pt : points) {
        for (std::size_t f = 0; f < pt.per_flow.size(); ++f) {
            out += format_double(pt.value);
            out += ',';
            out += std::to_string(f);
            out += ',';
            out += format_double(pt.per_flow[f].mean_loss_rate);
            out += ',';
            out += format_double(pt.per_flow[f].std_loss_rate);
            out += '\n';
        }
    }
    return out;
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd m;
    if (xs.empty()) return m;
    double sum = 0;
    for (double x : xs) sum += x;
    m.mean = sum / double(xs.size());
    if (xs.size() > 1) {
        double sq = 0;
        for (double x : xs) sq += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(sq / double(xs.size() - 1));
    }
    return m;
}

} // namespace

std::string summary_text(const Scenario& s, const std::vector<IterationResult>& results,
                         const RunConfig& cfg) {
    std::ostringstream out;
    out << "link capacity: " << format_double(s.link.capacity_bps) << " bps\n";
    out << "network delay: " << format_double(s.link.network_delay_ms) << " ms\n";
    out << "buffer: " << s.buffer.limit << " " << to_string(s.buffer.mode) << "\n";
    out << "offered load: " << format_double(offered_load_bps(s)) << " bps\n";
    out << "utilization: " << format_double(utilization(s)) << "\n";
    out << "duration: " << format_double(s.duration_s) << " s, start window "
        << format_double(s.start_window_s) << " s\n";
    out << "iterations: " << cfg.iterations << ", master seed " << cfg.master_seed << "\n";
    out << "\nper-flow loss rate (mean \xc2\xb1 sample std over iterations):\n";

    const std::size_t n_flows = results.empty() ? 0 : results.front().per_flow.size();
    for (std::size_t f = 0; f < n_flows; ++f) {
        std::vector<double> loss, delay;
        loss.reserve(results.size());
        delay.reserve(results.size());
        for (const auto& r : results) {
            loss.push_back(r.per_flow[f].loss_rate());
            delay.push_back(r.per_flow[f].mean_queue_delay_s());
        }
        const auto l = mean_std(loss);
        const auto d = mean_std(delay);
        const auto& st = results.front().per_flow[f];
        out << "  flow " << f << " " << st.name << " (" << to_string(st.kind) << "): loss "
            << format_double(l.mean) << " \xc2\xb1 " << format_double(l.std)
            << ", mean queue delay " << format_double(d.mean) << " s\n";
    }

    std::vector<double> agg;
    agg.reserve(results.size());
    for (const auto& r : results) agg.push_back(r.aggregate.loss_rate());
    const auto a = mean_std(agg);
    out << "aggregate: loss " << format_double(a.mean) << " \xc2\xb1 " << format_double(a.std)
        << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out)
        throw ConfigError("write failed: " + path);
}

std::vector<std::string> write_run_outputs(const std::string& out_dir, const Scenario& s,
                                           const std::vector<IterationResult>& results,
                                           const RunConfig& cfg, const EModelParams& emodel) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());

    std::vector<std::string> written;
    const auto emit = [&](const char* name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_text_file(path, content);
        written.push_back(path);
    };

    emit("per_iteration.csv", per_iteration_csv(results));
    emit("summary.txt", summary_text(s, results, cfg));

    std::vector<double> loss_samples;
    loss_samples.reserve(results.size() * (results.empty() ? 0 : results.front().per_flow.size()));
    for (const auto& r : results)
        for (const auto& st : r.per_flow)
            loss_samples.push_back(st.loss_rate());
    emit("loss_histogram.csv", histogram_csv(histogram(loss_samples, default_loss_edges())));

    bool any_voip = false;
    for (const auto& f : s.flows)
        if (f.kind == FlowKind::voip) any_voip = true;
    if (any_voip) {
        const auto scores = voip_mos_per_iteration(results, s.link.network_delay_ms, emodel);
        std::vector<double> mos;
        mos.reserve(scores.size());
        for (const auto& c : scores) mos.push_back(c.mos);
        emit("mos_histogram.csv", histogram_csv(histogram(mos, default_mos_edges())));
        emit("mos_cdf.csv", mos_cdf_csv(mos_cdf(results, cfg.mos_delay_sweep_ms, emodel)));
    }
    return written;
}

} // namespace burstgate
