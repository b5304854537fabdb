#pragma once

#include <cstdint>

namespace hive {

// Commercial serverless list prices; defaults stored in configs/pricing.json.
struct Pricing {
  double compute_gb_s = 1.66667e-5;
  double per_request = 2.0e-7;
  double storage_gb_month = 0.023;
  double write_per_1k = 0.005;
  double read_per_1k = 0.0004;
};

struct CostInputs {
  double compute_gb_s = 0.0;       // sum over functions of duration_s * memory_gb
  std::uint64_t invocations = 0;   // function executions
  double stored_gb_months = 0.0;   // training data + transferred sensor data
  std::uint64_t write_ops = 0;
  std::uint64_t read_ops = 0;
};

struct CostBreakdown {
  double compute_usd = 0.0;
  double storage_usd = 0.0;
  double requests_usd = 0.0;
  double total() const { return compute_usd + storage_usd + requests_usd; }
};

CostBreakdown estimate_cost(const CostInputs& in, const Pricing& pricing);

}  // namespace hive
