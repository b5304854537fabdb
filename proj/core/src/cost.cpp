#include "hivemind/cost.hpp"

namespace hive {

CostBreakdown estimate_cost(const CostInputs& in, const Pricing& pricing) {
  CostBreakdown out;
  out.compute_usd = in.compute_gb_s * pricing.compute_gb_s;
  out.requests_usd = static_cast<double>(in.invocations) * pricing.per_request;
  out.storage_usd = in.stored_gb_months * pricing.storage_gb_month +
                    static_cast<double>(in.write_ops) / 1000.0 * pricing.write_per_1k +
                    static_cast<double>(in.read_ops) / 1000.0 * pricing.read_per_1k;
  return out;
}

}  // namespace hive
