#include "hegsim/protocol/json.hpp"

#include <cmath>

namespace hegsim::protocol {

namespace ju = hegsim::jsonutil;

namespace {

void put_limit(Json& j, const char* key, double limit) {
  if (!std::isinf(limit)) j[key] = limit;
}

Result<double> get_limit(const Json& j, const std::string& key,
                         const std::string& path) {
  return ju::opt_number(j, key, kUnbounded, path);
}

Json signatures_to_json(const std::map<std::string, Bytes>& sigs) {
  Json j = Json::object();
  for (const auto& [identity, sig] : sigs) j[identity] = to_hex(sig);
  return j;
}

Result<std::map<std::string, Bytes>> signatures_from_json(
    const Json& j, const std::string& path) {
  std::map<std::string, Bytes> out;
  if (j.find("signatures") == j.end()) return out;  // unsigned artifact
  const Json& sigs = j.at("signatures");
  if (!sigs.is_object()) {
    return ju::schema_error(path + "/signatures", "expected an object");
  }
  for (const auto& [identity, hex] : sigs.items()) {
    if (!hex.is_string()) {
      return ju::schema_error(path + "/signatures/" + identity,
                              "expected a hex string");
    }
    Bytes sig;
    if (!from_hex(hex.get<std::string>(), sig)) {
      return ju::schema_error(path + "/signatures/" + identity,
                              "invalid hex");
    }
    out.emplace(identity, std::move(sig));
  }
  return out;
}

Result<Bytes> hex_field(const Json& j, const std::string& key,
                        const std::string& path) {
  auto text = ju::opt_string(j, key, "", path);
  if (!text.ok()) return text.error();
  Bytes out;
  if (!from_hex(text.value(), out)) {
    return ju::schema_error(path + "/" + key, "invalid hex");
  }
  return out;
}

}  // namespace

Json grant_to_json(const CapabilityGrant& g) {
  Json j;
  j["workload_class"] = to_string(g.workload_class);
  put_limit(j, "flop_limit", g.flop_limit);
  put_limit(j, "cluster_size_limit", g.cluster_size_limit);
  put_limit(j, "bandwidth_limit", g.bandwidth_limit);
  if (g.irrevocable) j["irrevocable"] = true;
  return j;
}

Result<CapabilityGrant> grant_from_json(const Json& j, const std::string& path) {
  CapabilityGrant g;
  auto cls = ju::require_string(j, "workload_class", path);
  if (!cls.ok()) return cls.error();
  auto parsed = workload_class_from_string(cls.value());
  if (!parsed) {
    return ju::schema_error(path + "/workload_class",
                            "unknown class '" + cls.value() + "'");
  }
  g.workload_class = *parsed;
  auto flop = get_limit(j, "flop_limit", path);
  if (!flop.ok()) return flop.error();
  g.flop_limit = flop.value();
  auto cluster = get_limit(j, "cluster_size_limit", path);
  if (!cluster.ok()) return cluster.error();
  g.cluster_size_limit = cluster.value();
  auto bw = get_limit(j, "bandwidth_limit", path);
  if (!bw.ok()) return bw.error();
  g.bandwidth_limit = bw.value();
  auto irr = ju::opt_bool(j, "irrevocable", false, path);
  if (!irr.ok()) return irr.error();
  g.irrevocable = irr.value();
  if (g.flop_limit < 0 || g.cluster_size_limit < 0 || g.bandwidth_limit < 0) {
    return ju::schema_error(path, "limits must be non-negative");
  }
  return g;
}

Json ruleset_to_json(const Ruleset& r) {
  Json j;
  j["ruleset_id"] = r.ruleset_id;
  Json grants = Json::array();
  for (const auto& g : r.grants) grants.push_back(grant_to_json(g));
  j["grants"] = std::move(grants);
  j["requires_license"] = r.requires_license;
  return j;
}

Result<Ruleset> ruleset_from_json(const Json& j, const std::string& path) {
  Ruleset r;
  auto id = ju::require_string(j, "ruleset_id", path);
  if (!id.ok()) return id.error();
  r.ruleset_id = id.value();
  auto grants = ju::require_array(j, "grants", path);
  if (!grants.ok()) return grants.error();
  std::size_t i = 0;
  for (const auto& gj : *grants.value()) {
    auto g = grant_from_json(gj, path + "/grants/" + std::to_string(i));
    if (!g.ok()) return g.error();
    r.grants.push_back(g.value());
    ++i;
  }
  auto lic = ju::opt_bool(j, "requires_license", false, path);
  if (!lic.ok()) return lic.error();
  r.requires_license = lic.value();
  return r;
}

Json update_to_json(const FirmwareUpdate& u) {
  Json j;
  j["serial"] = u.serial;
  j["version"] = u.version;
  j["ruleset"] = ruleset_to_json(u.ruleset);
  j["lifetime"] = u.lifetime;
  j["issued_at"] = u.issued_at;
  j["signatures"] = signatures_to_json(u.signatures);
  return j;
}

Result<FirmwareUpdate> update_from_json(const Json& j, const std::string& path) {
  FirmwareUpdate u;
  auto serial = ju::require_u64(j, "serial", path);
  if (!serial.ok()) return serial.error();
  u.serial = serial.value();
  auto version = ju::require_u64(j, "version", path);
  if (!version.ok()) return version.error();
  u.version = version.value();
  auto ruleset = ju::require_object(j, "ruleset", path);
  if (!ruleset.ok()) return ruleset.error();
  auto rs = ruleset_from_json(*ruleset.value(), path + "/ruleset");
  if (!rs.ok()) return rs.error();
  u.ruleset = rs.value();
  auto lifetime = ju::require_i64(j, "lifetime", path);
  if (!lifetime.ok()) return lifetime.error();
  u.lifetime = lifetime.value();
  if (u.lifetime <= 0) {
    return ju::schema_error(path + "/lifetime", "must be positive");
  }
  auto issued = ju::opt_i64(j, "issued_at", 0, path);
  if (!issued.ok()) return issued.error();
  u.issued_at = issued.value();
  auto sigs = signatures_from_json(j, path);
  if (!sigs.ok()) return sigs.error();
  u.signatures = sigs.value();
  if (u.serial == 0) return ju::schema_error(path + "/serial", "must be positive");
  if (u.version == 0) {
    return ju::schema_error(path + "/version", "must be positive");
  }
  return u;
}

Json extension_to_json(const ExtensionCertificate& e) {
  Json j;
  j["serial"] = e.serial;
  j["target_serial"] = e.target_serial;
  j["extends_expiry"] = e.extends_expiry;
  j["new_expiry"] = e.new_expiry;
  j["signatures"] = signatures_to_json(e.signatures);
  return j;
}

Result<ExtensionCertificate> extension_from_json(const Json& j,
                                                 const std::string& path) {
  ExtensionCertificate e;
  auto serial = ju::require_u64(j, "serial", path);
  if (!serial.ok()) return serial.error();
  e.serial = serial.value();
  auto target = ju::require_u64(j, "target_serial", path);
  if (!target.ok()) return target.error();
  e.target_serial = target.value();
  auto from = ju::require_i64(j, "extends_expiry", path);
  if (!from.ok()) return from.error();
  e.extends_expiry = from.value();
  auto to = ju::require_i64(j, "new_expiry", path);
  if (!to.ok()) return to.error();
  e.new_expiry = to.value();
  if (e.new_expiry <= e.extends_expiry) {
    return ju::schema_error(path + "/new_expiry",
                            "must be after extends_expiry");
  }
  auto sigs = signatures_from_json(j, path);
  if (!sigs.ok()) return sigs.error();
  e.signatures = sigs.value();
  return e;
}

Json license_to_json(const OperatingLicense& l) {
  Json j;
  j["device_id"] = l.device_id;
  j["expiry"] = l.expiry;
  j["issuer"] = l.issuer;
  j["signature"] = to_hex(l.signature);
  return j;
}

Result<OperatingLicense> license_from_json(const Json& j,
                                           const std::string& path) {
  OperatingLicense l;
  auto device = ju::require_string(j, "device_id", path);
  if (!device.ok()) return device.error();
  l.device_id = device.value();
  auto expiry = ju::require_i64(j, "expiry", path);
  if (!expiry.ok()) return expiry.error();
  l.expiry = expiry.value();
  auto issuer = ju::require_string(j, "issuer", path);
  if (!issuer.ok()) return issuer.error();
  l.issuer = issuer.value();
  auto sig = hex_field(j, "signature", path);
  if (!sig.ok()) return sig.error();
  l.signature = sig.value();
  return l;
}

Json attestation_to_json(const Attestation& a) {
  Json j;
  j["device_id"] = a.device_id;
  j["serial"] = a.serial;
  j["version"] = a.version;
  j["clock"] = a.clock;
  j["mode"] = to_string(a.mode);
  j["signature"] = to_hex(a.signature);
  return j;
}

Result<Attestation> attestation_from_json(const Json& j,
                                          const std::string& path) {
  Attestation a;
  auto device = ju::require_string(j, "device_id", path);
  if (!device.ok()) return device.error();
  a.device_id = device.value();
  auto serial = ju::require_u64(j, "serial", path);
  if (!serial.ok()) return serial.error();
  a.serial = serial.value();
  auto version = ju::require_u64(j, "version", path);
  if (!version.ok()) return version.error();
  a.version = version.value();
  auto clock = ju::require_i64(j, "clock", path);
  if (!clock.ok()) return clock.error();
  a.clock = clock.value();
  auto mode = ju::require_string(j, "mode", path);
  if (!mode.ok()) return mode.error();
  auto parsed = mode_from_string(mode.value());
  if (!parsed) {
    return ju::schema_error(path + "/mode", "unknown mode '" + mode.value() + "'");
  }
  a.mode = *parsed;
  auto sig = hex_field(j, "signature", path);
  if (!sig.ok()) return sig.error();
  a.signature = sig.value();
  return a;
}

Json policy_to_json(const ApproverPolicy& p) {
  Json j;
  j["approvers"] = p.approvers;
  Json rule;
  if (p.update_rule.kind == UpdateRule::Kind::AllApprovers) {
    rule["type"] = "all";
  } else {
    rule["type"] = "threshold";
    rule["k"] = p.update_rule.k;
  }
  j["update_rule"] = std::move(rule);
  j["extension_fraction"] =
      Json{{"num", p.extension_fraction.num}, {"den", p.extension_fraction.den}};
  if (p.baseline) j["baseline"] = ruleset_to_json(*p.baseline);
  if (p.ratchet_mode) j["ratchet_mode"] = true;
  return j;
}

Result<ApproverPolicy> policy_from_json(const Json& j, const std::string& path) {
  ApproverPolicy p;
  auto approvers = ju::require_array(j, "approvers", path);
  if (!approvers.ok()) return approvers.error();
  for (std::size_t i = 0; i < approvers.value()->size(); ++i) {
    const Json& a = (*approvers.value())[i];
    if (!a.is_string()) {
      return ju::schema_error(path + "/approvers/" + std::to_string(i),
                              "expected a string");
    }
    p.approvers.push_back(a.get<std::string>());
  }
  if (p.approvers.empty()) {
    return ju::schema_error(path + "/approvers", "must not be empty");
  }
  for (std::size_t i = 0; i < p.approvers.size(); ++i) {
    for (std::size_t k = i + 1; k < p.approvers.size(); ++k) {
      if (p.approvers[i] == p.approvers[k]) {
        return ju::schema_error(path + "/approvers",
                                "duplicate identity '" + p.approvers[i] + "'");
      }
    }
  }
  auto rule = ju::require_object(j, "update_rule", path);
  if (!rule.ok()) return rule.error();
  auto rule_type = ju::require_string(*rule.value(), "type", path + "/update_rule");
  if (!rule_type.ok()) return rule_type.error();
  if (rule_type.value() == "all") {
    p.update_rule.kind = UpdateRule::Kind::AllApprovers;
  } else if (rule_type.value() == "threshold") {
    p.update_rule.kind = UpdateRule::Kind::Threshold;
    auto k = ju::require_u64(*rule.value(), "k", path + "/update_rule");
    if (!k.ok()) return k.error();
    p.update_rule.k = static_cast<std::size_t>(k.value());
    if (p.update_rule.k < 1 || p.update_rule.k > p.approvers.size()) {
      return ju::schema_error(path + "/update_rule/k",
                              "must satisfy 1 <= k <= approver count");
    }
  } else {
    return ju::schema_error(path + "/update_rule/type",
                            "expected 'all' or 'threshold'");
  }
  if (j.find("extension_fraction") != j.end()) {
    auto frac = ju::require_object(j, "extension_fraction", path);
    if (!frac.ok()) return frac.error();
    auto num = ju::require_u64(*frac.value(), "num", path + "/extension_fraction");
    if (!num.ok()) return num.error();
    auto den = ju::require_u64(*frac.value(), "den", path + "/extension_fraction");
    if (!den.ok()) return den.error();
    p.extension_fraction.num = static_cast<std::uint32_t>(num.value());
    p.extension_fraction.den = static_cast<std::uint32_t>(den.value());
    if (p.extension_fraction.den == 0 || p.extension_fraction.num == 0 ||
        p.extension_fraction.num > p.extension_fraction.den) {
      return ju::schema_error(path + "/extension_fraction",
                              "must be a rational in (0, 1]");
    }
  } else {
    p.extension_fraction = majority_of(p.approvers.size());
  }
  if (j.find("baseline") != j.end()) {
    auto base = ju::require_object(j, "baseline", path);
    if (!base.ok()) return base.error();
    auto rs = ruleset_from_json(*base.value(), path + "/baseline");
    if (!rs.ok()) return rs.error();
    p.baseline = rs.value();
  }
  auto ratchet = ju::opt_bool(j, "ratchet_mode", false, path);
  if (!ratchet.ok()) return ratchet.error();
  p.ratchet_mode = ratchet.value();
  return p;
}

Json denial_to_json(const DenialRecord& d) {
  Json j;
  j["issuer"] = d.issuer;
  j["device_ids"] = d.device_ids;
  j["issued_at"] = d.issued_at;
  j["signature"] = to_hex(d.signature);
  return j;
}

Result<DenialRecord> denial_from_json(const Json& j, const std::string& path) {
  DenialRecord d;
  auto issuer = ju::require_string(j, "issuer", path);
  if (!issuer.ok()) return issuer.error();
  d.issuer = issuer.value();
  auto ids = ju::require_array(j, "device_ids", path);
  if (!ids.ok()) return ids.error();
  for (std::size_t i = 0; i < ids.value()->size(); ++i) {
    const Json& v = (*ids.value())[i];
    if (!v.is_string()) {
      return ju::schema_error(path + "/device_ids/" + std::to_string(i),
                              "expected a string");
    }
    d.device_ids.push_back(v.get<std::string>());
  }
  auto at = ju::require_i64(j, "issued_at", path);
  if (!at.ok()) return at.error();
  d.issued_at = at.value();
  auto sig = hex_field(j, "signature", path);
  if (!sig.ok()) return sig.error();
  d.signature = sig.value();
  return d;
}

Json workload_to_json(const WorkloadDescriptor& w) {
  Json j;
  j["workload_class"] = to_string(w.workload_class);
  j["total_flop"] = w.total_flop;
  j["cluster_size"] = w.cluster_size;
  j["bandwidth"] = w.bandwidth;
  if (w.authorized) j["authorized"] = true;
  return j;
}

Result<WorkloadDescriptor> workload_from_json(const Json& j,
                                              const std::string& path) {
  WorkloadDescriptor w;
  auto cls = ju::require_string(j, "workload_class", path);
  if (!cls.ok()) return cls.error();
  auto parsed = workload_class_from_string(cls.value());
  if (!parsed) {
    return ju::schema_error(path + "/workload_class",
                            "unknown class '" + cls.value() + "'");
  }
  w.workload_class = *parsed;
  auto flop = ju::opt_number(j, "total_flop", 0.0, path);
  if (!flop.ok()) return flop.error();
  w.total_flop = flop.value();
  auto cluster = ju::opt_number(j, "cluster_size", 1.0, path);
  if (!cluster.ok()) return cluster.error();
  w.cluster_size = cluster.value();
  auto bw = ju::opt_number(j, "bandwidth", 0.0, path);
  if (!bw.ok()) return bw.error();
  w.bandwidth = bw.value();
  auto auth = ju::opt_bool(j, "authorized", false, path);
  if (!auth.ok()) return auth.error();
  w.authorized = auth.value();
  if (w.total_flop < 0 || w.cluster_size < 0 || w.bandwidth < 0) {
    return ju::schema_error(path, "magnitudes must be non-negative");
  }
  return w;
}

Json conflict_to_json(const Conflict& c) {
  Json j;
  j["approver"] = c.approver;
  j["first"] = c.first;
  j["second"] = c.second;
  j["duplicate_serial"] = c.duplicate_serial;
  j["window_overlap"] = c.window_overlap;
  return j;
}

}  // namespace hegsim::protocol
