#pragma once

#include <json.hpp>

#include "scloss/config.hpp"
#include "scloss/grad.hpp"
#include "scloss/loss.hpp"
#include "scloss/metrics.hpp"
#include "scloss/sim.hpp"

namespace scloss::io {

nlohmann::ordered_json to_json(const SCLossConfig& cfg);
SCLossConfig config_from_json(const nlohmann::json& j);

/// {total, per_level_totals, reduction, config}
nlohmann::ordered_json loss_report(const LossBreakdown& lb, const SCLossConfig& cfg);
nlohmann::ordered_json to_json(const metrics::MetricReport& r, bool with_curve = false);
nlohmann::ordered_json to_json(const GradReport& r);
nlohmann::ordered_json to_json(const sim::BoundaryFirstReport& r);

}  // namespace scloss::io
