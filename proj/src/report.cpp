#include "gnd/report.hpp"

#include <fmt/format.h>

#include "gnd/format.hpp"
#include "gnd/instance_io.hpp"

namespace gnd {

namespace {

std::string scalar(const Report& v) {
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ", ";
      out += scalar(v[k]);
    }
    return out + "]";
  }
  return v.dump();
}

void render(const Report& node, const std::string& prefix, std::string& out) {
  for (const auto& [key, value] : node.items()) {
    const auto name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render(value, name, out);
    } else {
      out += fmt::format("{}: {}\n", name, scalar(value));
    }
  }
}

}  // namespace

std::string render_text(const Report& report) {
  std::string out;
  render(report, "", out);
  return out;
}

Report bounds_report(const TheoreticalBounds& b) {
  Report r;
  r["epsilon1"] = b.epsilon1;
  r["gamma_alpha"] = b.gamma_alpha;
  r["lambda_alpha"] = b.lambda_alpha;
  r["lambda"] = b.lambda;
  r["mu"] = b.mu;
  r["A"] = b.A;
  r["B"] = b.B;
  r["Q"] = b.Q;
  if (b.T_real < 1.8e19) {
    r["T"] = b.T;
  } else {
    r["T"] = b.T_real;
  }
  r["ratio_bound"] = b.ratio_bound;
  r["rho"] = b.rho;
  return r;
}

Report run_report(const Instance& instance, const AbrdConfig& config, const RunResult& result) {
  Report r;
  r["mechanism"] = std::string(to_string(config.mechanism));
  r["epsilon"] = config.epsilon;
  r["seed"] = config.seed;
  r["selection"] = std::string(to_string(config.selection));
  r["output"] = std::string(to_string(config.output));
  r["requests"] = instance.request_count();
  r["resources"] = instance.resource_count();
  r["bounds"] = bounds_report(result.bounds);
  r["step_budget"] = result.step_budget;
  r["steps_run"] = result.trace.back().t;
  r["converged"] = result.converged;
  r["guarantee"] = result.guarantee_void ? "void (step budget overridden)"
                   : config.mechanism == Mechanism::shapley_sampled
                       ? "holds with high probability"
                       : "holds";
  r["initial_cost"] = result.trace.front().cost;
  r["t_star"] = result.t_star;
  r["cost"] = result.cost;
  r["best_cost"] = result.best_cost;
  r["last_cost"] = result.last_cost;
  if (result.optimum) {
    r["optimum"] = *result.optimum;
    r["empirical_ratio"] = result.empirical_ratio ? Report(*result.empirical_ratio) : Report();
  }
  if (config.mechanism == Mechanism::shapley_sampled) {
    Report s;
    s["share_failure_probability"] = result.share_delta;
    s["sampled_shares"] = result.sampling.sampled_shares;
    s["union_failure_bound"] =
        std::min(1.0, result.share_delta * static_cast<double>(result.sampling.sampled_shares));
    s["total_samples"] = result.sampling.total_samples;
    s["capped_shares"] = result.sampling.capped_shares;
    s["sample_cap"] = config.max_samples;
    r["sampling"] = std::move(s);
  }
  r["profile"] = profile_json(instance, result.profile);
  return r;
}

}  // namespace gnd
