#include "hegsim/protocol/licenses.hpp"

#include <algorithm>

#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

Result<OperatingLicense> issue_license(const std::string& issuer,
                                       const std::vector<std::string>& authorities,
                                       const std::vector<DenialRecord>& denials,
                                       const std::string& device_id,
                                       Tick duration, Tick now) {
  if (std::find(authorities.begin(), authorities.end(), issuer) ==
      authorities.end()) {
    return Error{ErrorCode::UnauthorizedIssuer, issuer};
  }
  if (auto idx = find_denial(denials, device_id)) {
    return Error{ErrorCode::RenewalDenied,
                 "denial record " + std::to_string(*idx) + " by " +
                     denials[*idx].issuer + " covers " + device_id};
  }
  OperatingLicense lic;
  lic.device_id = device_id;
  lic.expiry = now + duration;
  lic.issuer = issuer;
  lic.signature = sign_payload(issuer, canonical_encode(lic));
  return lic;
}

Result<DeviceState> apply_license(DeviceState device,
                                  const OperatingLicense& license) {
  if (license.device_id != device.device_id) {
    return Error{ErrorCode::DeviceMismatch,
                 "license for " + license.device_id + " offered to " +
                     device.device_id};
  }
  if (!verify_payload(license.issuer, canonical_encode(license),
                      license.signature)) {
    return Error{ErrorCode::ApprovalInvalid, "bad issuer signature"};
  }
  device.license = license;
  return device;
}

DenialRecord deny_renewal(const std::string& issuer,
                          std::vector<std::string> device_ids, Tick at) {
  DenialRecord rec;
  rec.issuer = issuer;
  std::sort(device_ids.begin(), device_ids.end());
  device_ids.erase(std::unique(device_ids.begin(), device_ids.end()),
                   device_ids.end());
  rec.device_ids = std::move(device_ids);
  rec.issued_at = at;
  rec.signature = sign_payload(issuer, canonical_encode(rec));
  return rec;
}

bool verify_denial(const DenialRecord& record) {
  return verify_payload(record.issuer, canonical_encode(record),
                        record.signature);
}

std::optional<std::size_t> find_denial(const std::vector<DenialRecord>& denials,
                                       const std::string& device_id) {
  for (std::size_t i = 0; i < denials.size(); ++i) {
    if (std::binary_search(denials[i].device_ids.begin(),
                           denials[i].device_ids.end(), device_id)) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace hegsim::protocol
