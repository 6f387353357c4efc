#include "hegsim/scenario/config.hpp"

#include <algorithm>
#include <set>

#include "hegsim/oversight/registry.hpp"
#include "hegsim/protocol/json.hpp"

namespace hegsim::scenario {

namespace ju = hegsim::jsonutil;
using ju::Json;

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::ProposeUpdate: return "propose_update";
    case EventKind::ProposeExtension: return "propose_extension";
    case EventKind::Sign: return "sign";
    case EventKind::Install: return "install";
    case EventKind::Extend: return "extend";
    case EventKind::AdvanceClock: return "advance_clock";
    case EventKind::Workload: return "workload";
    case EventKind::LicenseIssue: return "license_issue";
    case EventKind::LicenseDeny: return "license_deny";
    case EventKind::LocationCheck: return "location_check";
    case EventKind::InspectionRound: return "inspection_round";
    case EventKind::TamperInject: return "tamper_inject";
    case EventKind::Attest: return "attest";
  }
  return "unknown";
}

std::optional<EventKind> event_kind_from_string(const std::string& s) {
  static const std::pair<const char*, EventKind> table[] = {
      {"propose_update", EventKind::ProposeUpdate},
      {"propose_extension", EventKind::ProposeExtension},
      {"sign", EventKind::Sign},
      {"install", EventKind::Install},
      {"extend", EventKind::Extend},
      {"advance_clock", EventKind::AdvanceClock},
      {"workload", EventKind::Workload},
      {"license_issue", EventKind::LicenseIssue},
      {"license_deny", EventKind::LicenseDeny},
      {"location_check", EventKind::LocationCheck},
      {"inspection_round", EventKind::InspectionRound},
      {"tamper_inject", EventKind::TamperInject},
      {"attest", EventKind::Attest},
  };
  for (const auto& [text, kind] : table) {
    if (s == text) return kind;
  }
  return std::nullopt;
}

namespace {

/// Collects violations; helpers return false when the field was bad so
/// callers can skip dependent work without aborting the whole parse.
struct Collector {
  std::vector<Error>* out;

  void add(Error e) { out->push_back(std::move(e)); }

  template <class T>
  bool take(Result<T> r, T& into) {
    if (!r.ok()) {
      add(r.error());
      return false;
    }
    into = std::move(r.value());
    return true;
  }
};

std::vector<std::string> string_array(const Json& arr, const std::string& path,
                                      Collector& c) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      c.add(ju::schema_error(path + "/" + std::to_string(i),
                             "expected a string"));
      continue;
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::optional<std::vector<double>> number_array(const Json& parent,
                                                const std::string& key,
                                                const std::string& path,
                                                Collector& c) {
  auto arr = ju::require_array(parent, key, path);
  if (!arr.ok()) {
    c.add(arr.error());
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.value()->size(); ++i) {
    const Json& v = (*arr.value())[i];
    if (!v.is_number()) {
      c.add(ju::schema_error(path + "/" + key + "/" + std::to_string(i),
                             "expected a number"));
      return std::nullopt;
    }
    out.push_back(v.get<double>());
  }
  if (out.empty()) {
    c.add(ju::schema_error(path + "/" + key, "must not be empty"));
    return std::nullopt;
  }
  return out;
}

void parse_device(const Json& j, const std::string& path, Collector& c,
                  std::vector<DeviceSpec>& out) {
  DeviceSpec spec;
  if (!c.take(ju::require_string(j, "device_id", path), spec.device_id)) return;
  auto initial = ju::require_object(j, "initial", path);
  if (!initial.ok()) {
    c.add(initial.error());
    return;
  }
  const std::string ipath = path + "/initial";
  const Json& init = *initial.value();
  bool ok = true;
  ok &= c.take(ju::require_u64(init, "serial", ipath), spec.serial);
  ok &= c.take(ju::opt_u64(init, "version", 1, ipath), spec.version);
  ok &= c.take(ju::require_i64(init, "lifetime", ipath), spec.lifetime);
  auto ruleset = ju::require_object(init, "ruleset", ipath);
  if (!ruleset.ok()) {
    c.add(ruleset.error());
    return;
  }
  auto rs = protocol::ruleset_from_json(*ruleset.value(), ipath + "/ruleset");
  if (!rs.ok()) {
    c.add(rs.error());
    return;
  }
  spec.ruleset = rs.value();
  if (!ok) return;
  if (spec.serial == 0) {
    c.add(ju::schema_error(ipath + "/serial", "must be positive"));
    return;
  }
  if (spec.lifetime <= 0) {
    c.add(ju::schema_error(ipath + "/lifetime", "must be positive"));
    return;
  }
  if (j.find("location") != j.end()) {
    auto loc = ju::require_object(j, "location", path);
    if (!loc.ok()) {
      c.add(loc.error());
      return;
    }
    protocol::LocationConfig lc;
    auto landmarks = ju::require_array(*loc.value(), "landmarks",
                                       path + "/location");
    if (!landmarks.ok()) {
      c.add(landmarks.error());
      return;
    }
    lc.landmarks = string_array(*landmarks.value(),
                                path + "/location/landmarks", c);
    if (!c.take(ju::require_number(*loc.value(), "max_distance",
                                   path + "/location"),
                lc.max_distance)) {
      return;
    }
    spec.location = std::move(lc);
  }
  out.push_back(std::move(spec));
}

bool parse_event(const Json& j, const std::string& path, Collector& c,
                 Event& ev) {
  if (!c.take(ju::require_i64(j, "tick", path), ev.tick)) return false;
  std::string type;
  if (!c.take(ju::require_string(j, "type", path), type)) return false;
  auto kind = event_kind_from_string(type);
  if (!kind) {
    c.add(Error{ErrorCode::UnknownEventTag,
                path + "/type: unknown event type '" + type + "'"});
    return false;
  }
  ev.kind = *kind;

  auto need_string = [&](const char* key, std::string& into) {
    return c.take(ju::require_string(j, key, path), into);
  };
  auto opt_tick = [&](const char* key, std::optional<Tick>& into) {
    if (j.find(key) == j.end()) return true;
    Tick v = 0;
    if (!c.take(ju::require_i64(j, key, path), v)) return false;
    into = v;
    return true;
  };

  switch (ev.kind) {
    case EventKind::ProposeUpdate: {
      if (!need_string("name", ev.name)) return false;
      if (!c.take(ju::require_u64(j, "version", path), ev.version)) return false;
      if (!c.take(ju::require_i64(j, "lifetime", path), ev.lifetime)) {
        return false;
      }
      if (ev.lifetime <= 0) {
        c.add(ju::schema_error(path + "/lifetime", "must be positive"));
        return false;
      }
      auto ruleset = ju::require_object(j, "ruleset", path);
      if (!ruleset.ok()) {
        c.add(ruleset.error());
        return false;
      }
      auto rs = protocol::ruleset_from_json(*ruleset.value(), path + "/ruleset");
      if (!rs.ok()) {
        c.add(rs.error());
        return false;
      }
      ev.ruleset = rs.value();
      return opt_tick("issued_at", ev.issued_at);
    }
    case EventKind::ProposeExtension: {
      if (!need_string("name", ev.name)) return false;
      if (!need_string("target", ev.target)) return false;
      if (!opt_tick("new_expiry", ev.new_expiry)) return false;
      if (!ev.new_expiry) {
        c.add(ju::schema_error(path + "/new_expiry", "missing"));
        return false;
      }
      return opt_tick("extends_expiry", ev.extends_expiry);
    }
    case EventKind::Sign: {
      if (!need_string("name", ev.name)) return false;
      if (j.find("signers") != j.end()) {
        auto arr = ju::require_array(j, "signers", path);
        if (!arr.ok()) {
          c.add(arr.error());
          return false;
        }
        ev.signers = string_array(*arr.value(), path + "/signers", c);
      }
      return c.take(ju::opt_bool(j, "bypass_transcript", false, path),
                    ev.bypass_transcript);
    }
    case EventKind::Install:
    case EventKind::Extend:
      return need_string("device", ev.device) && need_string("name", ev.name);
    case EventKind::AdvanceClock:
      return true;
    case EventKind::Workload: {
      if (!need_string("device", ev.device)) return false;
      auto w = ju::require_object(j, "workload", path);
      if (!w.ok()) {
        c.add(w.error());
        return false;
      }
      auto parsed = protocol::workload_from_json(*w.value(), path + "/workload");
      if (!parsed.ok()) {
        c.add(parsed.error());
        return false;
      }
      ev.workload = parsed.value();
      return true;
    }
    case EventKind::LicenseIssue: {
      if (!need_string("issuer", ev.issuer)) return false;
      if (!need_string("device", ev.device)) return false;
      if (!c.take(ju::require_i64(j, "duration", path), ev.duration)) {
        return false;
      }
      if (ev.duration <= 0) {
        c.add(ju::schema_error(path + "/duration", "must be positive"));
        return false;
      }
      return true;
    }
    case EventKind::LicenseDeny: {
      if (!need_string("issuer", ev.issuer)) return false;
      auto arr = ju::require_array(j, "devices", path);
      if (!arr.ok()) {
        c.add(arr.error());
        return false;
      }
      ev.devices = string_array(*arr.value(), path + "/devices", c);
      if (ev.devices.empty()) {
        c.add(ju::schema_error(path + "/devices", "must not be empty"));
        return false;
      }
      return true;
    }
    case EventKind::LocationCheck: {
      if (!need_string("device", ev.device)) return false;
      auto arr = ju::require_array(j, "responses", path);
      if (!arr.ok()) {
        c.add(arr.error());
        return false;
      }
      for (std::size_t i = 0; i < arr.value()->size(); ++i) {
        const std::string rpath = path + "/responses/" + std::to_string(i);
        const Json& r = (*arr.value())[i];
        std::string landmark;
        double distance = 0.0;
        if (!c.take(ju::require_string(r, "landmark", rpath), landmark)) {
          return false;
        }
        if (!c.take(ju::require_number(r, "distance", rpath), distance)) {
          return false;
        }
        ev.responses.emplace_back(std::move(landmark), distance);
      }
      return true;
    }
    case EventKind::InspectionRound: {
      auto arr = ju::require_array(j, "responders", path);
      if (!arr.ok()) {
        c.add(arr.error());
        return false;
      }
      ev.responders = string_array(*arr.value(), path + "/responders", c);
      return opt_tick("max_unexplained", ev.max_unexplained);
    }
    case EventKind::TamperInject: {
      bool any = false;
      if (j.find("power_gap") != j.end()) {
        auto gap = ju::require_object(j, "power_gap", path);
        if (!gap.ok()) {
          c.add(gap.error());
          return false;
        }
        PowerInterval pi;
        if (!c.take(ju::require_i64(*gap.value(), "from", path + "/power_gap"),
                    pi.start)) {
          return false;
        }
        if (!c.take(ju::require_i64(*gap.value(), "to", path + "/power_gap"),
                    pi.end)) {
          return false;
        }
        if (pi.end <= pi.start) {
          c.add(ju::schema_error(path + "/power_gap", "needs to > from"));
          return false;
        }
        if (!need_string("device", ev.device)) return false;
        ev.power_gap = pi;
        any = true;
      }
      if (!c.take(ju::opt_string(j, "explanation", "", path), ev.explanation)) {
        return false;
      }
      if (j.find("status") != j.end()) {
        if (!c.take(ju::require_string(j, "status", path), ev.status)) {
          return false;
        }
        if (!need_string("entity", ev.entity)) return false;
        if (!oversight::entity_status_from_string(ev.status)) {
          c.add(ju::schema_error(path + "/status",
                                 "unknown status '" + ev.status + "'"));
          return false;
        }
        any = true;
      }
      if (!any) {
        c.add(ju::schema_error(path, "needs power_gap and/or status"));
        return false;
      }
      return true;
    }
    case EventKind::Attest:
      return need_string("device", ev.device);
  }
  return false;
}

}  // namespace

ConfigParse parse_config(const std::string& text) {
  ConfigParse result;
  Collector c{&result.violations};

  auto doc = ju::parse_text(text);
  if (!doc.ok()) {
    c.add(doc.error());
    return result;
  }
  const Json& j = doc.value();
  if (!j.is_object()) {
    c.add(ju::schema_error("", "expected a JSON object"));
    return result;
  }

  ScenarioConfig config;
  c.take(ju::require_u64(j, "seed", ""), config.seed);

  if (auto policy = ju::require_object(j, "policy", ""); policy.ok()) {
    auto parsed = protocol::policy_from_json(*policy.value(), "/policy");
    if (parsed.ok()) {
      config.policy = parsed.value();
    } else {
      c.add(parsed.error());
    }
  } else {
    c.add(policy.error());
  }

  if (j.find("devices") != j.end()) {
    if (auto devices = ju::require_array(j, "devices", ""); devices.ok()) {
      for (std::size_t i = 0; i < devices.value()->size(); ++i) {
        parse_device((*devices.value())[i], "/devices/" + std::to_string(i), c,
                     config.devices);
      }
    } else {
      c.add(devices.error());
    }
  }
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < config.devices.size(); ++i) {
    if (!seen_ids.insert(config.devices[i].device_id).second) {
      c.add(ju::schema_error("/devices/" + std::to_string(i) + "/device_id",
                             "duplicate id '" + config.devices[i].device_id +
                                 "'"));
    }
  }

  if (j.find("license_authorities") != j.end()) {
    if (auto arr = ju::require_array(j, "license_authorities", ""); arr.ok()) {
      config.license_authorities =
          string_array(*arr.value(), "/license_authorities", c);
    } else {
      c.add(arr.error());
    }
  }

  if (j.find("registry") != j.end()) {
    auto reg = oversight::registry_from_json(j.at("registry"), "/registry");
    if (reg.ok()) {
      config.registry = reg.value();
    } else {
      c.add(reg.error());
    }
  }

  if (j.find("events") != j.end()) {
    if (auto events = ju::require_array(j, "events", ""); events.ok()) {
      Tick last_tick = std::numeric_limits<Tick>::min();
      for (std::size_t i = 0; i < events.value()->size(); ++i) {
        const std::string path = "/events/" + std::to_string(i);
        Event ev;
        if (!parse_event((*events.value())[i], path, c, ev)) continue;
        if (ev.tick < 0) {
          c.add(ju::schema_error(path + "/tick", "must be non-negative"));
          continue;
        }
        if (ev.tick < last_tick) {
          c.add(ju::schema_error(
              path + "/tick",
              "out of order: " + std::to_string(ev.tick) + " after " +
                  std::to_string(last_tick)));
          continue;
        }
        last_tick = ev.tick;
        config.events.push_back(std::move(ev));
      }
    } else {
      c.add(events.error());
    }
  }

  if (j.find("stability") != j.end()) {
    if (auto st = ju::require_object(j, "stability", ""); st.ok()) {
      StabilityGrid grid;
      auto u_w = number_array(*st.value(), "u_w", "/stability", c);
      auto p_doom = number_array(*st.value(), "p_doom", "/stability", c);
      auto pwd = number_array(*st.value(), "p_w_given_d", "/stability", c);
      if (u_w && p_doom && pwd) {
        grid.u_w = *u_w;
        grid.p_doom = *p_doom;
        grid.p_w_given_d = *pwd;
        config.stability = std::move(grid);
      }
    } else {
      c.add(st.error());
    }
  }

  if (j.find("oversight") != j.end()) {
    if (auto ov = ju::require_object(j, "oversight", ""); ov.ok()) {
      OversightSpec spec;
      const Json& o = *ov.value();
      bool ok = true;
      std::uint64_t population = 0, compromised = 0, customers = 1,
                    trials = 10000;
      ok &= c.take(ju::require_u64(o, "population", "/oversight"), population);
      ok &= c.take(ju::require_u64(o, "compromised", "/oversight"), compromised);
      ok &= c.take(ju::require_number(o, "sampling_rate", "/oversight"),
                   spec.batch.sampling_rate);
      ok &= c.take(ju::opt_u64(o, "customers", 1, "/oversight"), customers);
      ok &= c.take(ju::opt_u64(o, "trials", 10000, "/oversight"), trials);
      if (ok) {
        spec.batch.population = static_cast<std::size_t>(population);
        spec.batch.compromised = static_cast<std::size_t>(compromised);
        spec.batch.customers = static_cast<std::size_t>(customers);
        spec.trials = static_cast<std::size_t>(trials);
        if (spec.batch.compromised > spec.batch.population) {
          c.add(ju::schema_error("/oversight/compromised",
                                 "exceeds population"));
        } else if (!(spec.batch.sampling_rate >= 0.0 &&
                     spec.batch.sampling_rate <= 1.0)) {
          c.add(ju::schema_error("/oversight/sampling_rate",
                                 "must be in [0,1]"));
        } else {
          if (spec.batch.compromised > 0) {
            spec.batch.batches.push_back(spec.batch.compromised);
          }
          if (spec.batch.population > spec.batch.compromised) {
            spec.batch.batches.push_back(spec.batch.population -
                                         spec.batch.compromised);
          }
          config.oversight = std::move(spec);
        }
      }
    } else {
      c.add(ov.error());
    }
  }

  if (result.violations.empty()) {
    result.config = std::move(config);
  }
  return result;
}

jsonutil::Json config_to_json(const ScenarioConfig& config) {
  Json j;
  j["seed"] = config.seed;
  j["policy"] = protocol::policy_to_json(config.policy);
  Json devices = Json::array();
  for (const auto& d : config.devices) {
    Json dj;
    dj["device_id"] = d.device_id;
    Json init;
    init["serial"] = d.serial;
    init["version"] = d.version;
    init["lifetime"] = d.lifetime;
    init["ruleset"] = protocol::ruleset_to_json(d.ruleset);
    dj["initial"] = std::move(init);
    if (d.location) {
      Json loc;
      loc["landmarks"] = d.location->landmarks;
      loc["max_distance"] = d.location->max_distance;
      dj["location"] = std::move(loc);
    }
    devices.push_back(std::move(dj));
  }
  j["devices"] = std::move(devices);
  if (!config.license_authorities.empty()) {
    j["license_authorities"] = config.license_authorities;
  }
  if (!config.registry.empty()) {
    j["registry"] = oversight::registry_to_json(config.registry);
  }
  Json events = Json::array();
  for (const auto& ev : config.events) {
    Json e;
    e["tick"] = ev.tick;
    e["type"] = to_string(ev.kind);
    switch (ev.kind) {
      case EventKind::ProposeUpdate:
        e["name"] = ev.name;
        e["version"] = ev.version;
        e["lifetime"] = ev.lifetime;
        if (ev.ruleset) e["ruleset"] = protocol::ruleset_to_json(*ev.ruleset);
        if (ev.issued_at) e["issued_at"] = *ev.issued_at;
        break;
      case EventKind::ProposeExtension:
        e["name"] = ev.name;
        e["target"] = ev.target;
        if (ev.new_expiry) e["new_expiry"] = *ev.new_expiry;
        if (ev.extends_expiry) e["extends_expiry"] = *ev.extends_expiry;
        break;
      case EventKind::Sign:
        e["name"] = ev.name;
        if (!ev.signers.empty()) e["signers"] = ev.signers;
        if (ev.bypass_transcript) e["bypass_transcript"] = true;
        break;
      case EventKind::Install:
      case EventKind::Extend:
        e["device"] = ev.device;
        e["name"] = ev.name;
        break;
      case EventKind::AdvanceClock:
        break;
      case EventKind::Workload:
        e["device"] = ev.device;
        if (ev.workload) e["workload"] = protocol::workload_to_json(*ev.workload);
        break;
      case EventKind::LicenseIssue:
        e["issuer"] = ev.issuer;
        e["device"] = ev.device;
        e["duration"] = ev.duration;
        break;
      case EventKind::LicenseDeny:
        e["issuer"] = ev.issuer;
        e["devices"] = ev.devices;
        break;
      case EventKind::LocationCheck: {
        e["device"] = ev.device;
        Json rs = Json::array();
        for (const auto& [landmark, distance] : ev.responses) {
          rs.push_back(Json{{"landmark", landmark}, {"distance", distance}});
        }
        e["responses"] = std::move(rs);
        break;
      }
      case EventKind::InspectionRound:
        e["responders"] = ev.responders;
        if (ev.max_unexplained) e["max_unexplained"] = *ev.max_unexplained;
        break;
      case EventKind::TamperInject:
        if (!ev.device.empty()) e["device"] = ev.device;
        if (ev.power_gap) {
          e["power_gap"] =
              Json{{"from", ev.power_gap->start}, {"to", ev.power_gap->end}};
        }
        if (!ev.explanation.empty()) e["explanation"] = ev.explanation;
        if (!ev.status.empty()) {
          e["status"] = ev.status;
          e["entity"] = ev.entity;
        }
        break;
      case EventKind::Attest:
        e["device"] = ev.device;
        break;
    }
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  if (config.stability) {
    j["stability"] = Json{{"u_w", config.stability->u_w},
                          {"p_doom", config.stability->p_doom},
                          {"p_w_given_d", config.stability->p_w_given_d}};
  }
  if (config.oversight) {
    Json o;
    o["population"] = config.oversight->batch.population;
    o["compromised"] = config.oversight->batch.compromised;
    o["sampling_rate"] = config.oversight->batch.sampling_rate;
    o["customers"] = config.oversight->batch.customers;
    o["trials"] = config.oversight->trials;
    j["oversight"] = std::move(o);
  }
  return j;
}

}  // namespace hegsim::scenario
