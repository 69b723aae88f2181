#include "desync/report.hpp"

namespace desync {

using nlohmann::json;

json to_json(const LoopConfig& cfg) {
  json j;
  j["method"] = to_string(cfg.method);
  j["buffer"] = to_string(cfg.buffer.discipline);
  if (cfg.buffer.capacity)
    j["capacity"] = *cfg.buffer.capacity;
  else
    j["capacity"] = "unbounded";
  j["state_cap"] = cfg.state_cap;
  return j;
}

json to_json(const EquivVerdict& v) {
  json j;
  j["relation"] = to_string(v.relation);
  j["holds"] = v.holds;
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {{"side", w.side == Side::lhs ? "lhs" : "rhs"},
                    {"lhs_state", w.lhs_state},
                    {"rhs_state", w.rhs_state},
                    {"label", w.label},
                    {"trace", w.trace}};
  } else {
    j["witness"] = nullptr;
  }
  j["stats"] = {{"lhs_states", v.stats.lhs_states},
                {"lhs_transitions", v.stats.lhs_transitions},
                {"rhs_states", v.stats.rhs_states},
                {"rhs_transitions", v.stats.rhs_transitions},
                {"reduced", v.stats.reduced}};
  return j;
}

json to_json(const DeadlockReport& d) {
  json list = json::array();
  for (std::size_t i = 0; i < d.deadlocks.size() && i < kReportedDeadlocks; ++i)
    list.push_back({{"state", d.deadlocks[i].state}, {"trace", d.deadlocks[i].trace}});
  return {{"count", d.deadlocks.size()}, {"partial", d.partial}, {"deadlocks", list}};
}

json to_json(const ValidityVerdict& v, const Signature& sig) {
  json j;
  j["valid"] = v.valid();
  j["simple"] = v.simple.simple;
  j["deterministic"] = v.determinism.deterministic;
  j["forbidden_label"] = v.forbidden_label ? json(*v.forbidden_label) : json(nullptr);
  j["states"] = v.states;
  j["explanation"] = v.explain(sig);
  return j;
}

json lts_stats(const Lts& lts) {
  return {{"states", lts.num_states},
          {"transitions", lts.transitions.size()},
          {"truncated", lts.truncated},
          {"cap", lts.cap}};
}

json to_json(const ConditionReport& r, const Signature& sig) {
  json j;
  j["plant_validity"] = to_json(r.plant_validity, sig);
  j["supervisor_validity"] = to_json(r.supervisor_validity, sig);

  json wp = {{"holds", r.well_posed.holds}, {"pairs", r.well_posed.pairs}, {"witness", nullptr}};
  if (const auto& w = r.well_posed.witness)
    wp["witness"] = {{"path", w->path},
                     {"unmatched", w->unmatched},
                     {"role", to_string(w->role)},
                     {"plant_state", w->plant_state},
                     {"supervisor_state", w->supervisor_state}};
  j["well_posed"] = wp;

  json loops = json::array();
  for (const auto& s : r.self_loops.offenders)
    loops.push_back({{"role", to_string(s.role)}, {"process", s.process}, {"state", s.state}, {"label", s.label}});
  j["self_loops"] = {{"holds", r.self_loops.holds}, {"offenders", loops}};

  if (r.diamond) {
    json d = {{"holds", r.diamond->holds}, {"witness", nullptr}};
    if (const auto& w = r.diamond->witness)
      d["witness"] = {{"state", w->state}, {"access", w->access}, {"a", w->a}, {"b", w->b}, {"q1", w->q1}, {"q2", w->q2}};
    j["diamond"] = d;
  } else {
    j["diamond"] = nullptr;
  }

  if (r.cycle) {
    json c = {{"holds", r.cycle->holds}, {"strict", r.cycle->strict}, {"witness", nullptr}};
    if (const auto& w = r.cycle->witness)
      c["witness"] = {{"empty_side", to_string(w->empty_side)},
                      {"states", w->states},
                      {"labels", w->labels},
                      {"access", w->access}};
    j["cycle"] = c;
  } else {
    j["cycle"] = nullptr;
  }

  json eta = json::array();
  for (std::size_t s = 0; s < r.enabled.size(); ++s)
    eta.push_back({{"state", s}, {"enabled", r.enabled[s]}, {"degree", r.branching[s]}});
  j["loop"] = {{"states", r.loop_states}, {"transitions", r.loop_transitions}, {"enabled", eta}};

  if (r.direct) {
    json d = {{"config", to_json(r.direct->config)},
              {"truncated", r.direct->truncated},
              {"states", r.direct->states},
              {"deadlocks", to_json(r.direct->deadlocks)}};
    d["branching"] = r.direct->branching ? to_json(*r.direct->branching) : json(nullptr);
    j["direct"] = d;
  }
  j["all_hold"] = r.all_hold();
  j["notes"] = r.notes;
  return j;
}

json RunReport::to_json() const {
  return {{"tool", "desync"},
          {"version", kToolVersion},
          {"command", command},
          {"inputs", inputs},
          {"input_digest", input_digest},
          {"config", config},
          {"results", results},
          {"warnings", warnings},
          {"exit_code", exit_code},
          {"timings", timings}};
}

}  // namespace desync
