#pragma once

#include <vector>

#include "hegsim/core/result.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Issues (or renews) a device-bound license expiring at now + duration.
/// The issuer must be one of the configured authorities, and the device
/// must not appear in any standing denial record: a denied device stays
/// denied until the ledger entry is withdrawn, and the refusal names the
/// record that blocks it.
Result<OperatingLicense> issue_license(const std::string& issuer,
                                       const std::vector<std::string>& authorities,
                                       const std::vector<DenialRecord>& denials,
                                       const std::string& device_id,
                                       Tick duration, Tick now);

/// Installs a license on its device. The license must name this device and
/// carry a valid issuer signature.
Result<DeviceState> apply_license(DeviceState device,
                                  const OperatingLicense& license);

/// Signed, auditable refusal to renew the listed devices. Device ids are
/// stored sorted so the record's bytes are canonical.
DenialRecord deny_renewal(const std::string& issuer,
                          std::vector<std::string> device_ids, Tick at);

bool verify_denial(const DenialRecord& record);

/// Index of the first denial record covering device_id, if any.
std::optional<std::size_t> find_denial(const std::vector<DenialRecord>& denials,
                                       const std::string& device_id);

}  // namespace hegsim::protocol
