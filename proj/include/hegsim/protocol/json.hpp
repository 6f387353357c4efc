#pragma once

#include "hegsim/core/jsonutil.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

using jsonutil::Json;

/// JSON interchange for signed artifacts and policy objects, mirroring the
/// type fields. Signatures travel as lowercase hex; unbounded limits are
/// simply omitted (absent key = unbounded). Parsers return SchemaViolation
/// with a JSON-pointer-style path on any malformed document.

Json grant_to_json(const CapabilityGrant& g);
Result<CapabilityGrant> grant_from_json(const Json& j, const std::string& path);

Json ruleset_to_json(const Ruleset& r);
Result<Ruleset> ruleset_from_json(const Json& j, const std::string& path);

Json update_to_json(const FirmwareUpdate& u);
Result<FirmwareUpdate> update_from_json(const Json& j, const std::string& path);

Json extension_to_json(const ExtensionCertificate& e);
Result<ExtensionCertificate> extension_from_json(const Json& j,
                                                 const std::string& path);

Json license_to_json(const OperatingLicense& l);
Result<OperatingLicense> license_from_json(const Json& j,
                                           const std::string& path);

Json attestation_to_json(const Attestation& a);
Result<Attestation> attestation_from_json(const Json& j,
                                          const std::string& path);

Json policy_to_json(const ApproverPolicy& p);
Result<ApproverPolicy> policy_from_json(const Json& j, const std::string& path);

Json denial_to_json(const DenialRecord& d);
Result<DenialRecord> denial_from_json(const Json& j, const std::string& path);

Json workload_to_json(const WorkloadDescriptor& w);
Result<WorkloadDescriptor> workload_from_json(const Json& j,
                                              const std::string& path);

Json conflict_to_json(const Conflict& c);

}  // namespace hegsim::protocol
