#include "hegsim/core/digest.hpp"

#include <openssl/evp.h>

#include "hegsim/core/bytes.hpp"

namespace hegsim {

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

std::string sha256_hex(std::span<const std::uint8_t> data) {
  Digest d = sha256(data);
  return to_hex(d);
}

}  // namespace hegsim
