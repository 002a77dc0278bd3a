#pragma once

#include <string>
#include <vector>

#include "burstgate/engine.hpp"
#include "burstgate/metrics.hpp"

namespace burstgate {

/// Shortest round-tripping decimal form of a double (to_chars), so emitted
/// CSV is byte-stable across runs and platforms and parse→write is the
/// identity on our own files.
std::string format_double(double v);

/// `iteration,flow_id,kind,sent,delivered,dropped,residual,loss_rate,mean_queue_delay_s`
std::string per_iteration_csv(const std::vector<IterationResult>& results);

/// `bin_low,bin_high,count` (underflow/overflow rows are omitted; the
/// default edges cover the meaningful range).
std::string histogram_csv(const Histogram& h);

/// `delay_ms,mos,probability`
std::string mos_cdf_csv(const std::vector<MosCdfPoint>& curve);

/// `value,flow_id,mean_loss_rate,std_loss_rate`
std::string sweep_csv(const std::vector<SweepPoint>& points);

/// Human-readable run summary: link, offered load, utilization, per-flow
/// mean ± sample-std loss and mean queue delay, aggregate loss.
std::string summary_text(const Scenario& s, const std::vector<IterationResult>& results,
                         const RunConfig& cfg);

/// Everything cmd_run emits into `out_dir`: per_iteration.csv, summary.txt,
/// loss_histogram.csv (per-iteration per-flow loss rates, all flows pooled),
/// and — when the scenario has VoIP flows — mos_histogram.csv (per-call MOS
/// at the configured network delay) and mos_cdf.csv (over the delay sweep).
/// Returns the list of files written. Throws on I/O failure.
std::vector<std::string> write_run_outputs(const std::string& out_dir, const Scenario& s,
                                           const std::vector<IterationResult>& results,
                                           const RunConfig& cfg,
                                           const EModelParams& emodel = {});

void write_text_file(const std::string& path, const std::string& content);

} // namespace burstgate
