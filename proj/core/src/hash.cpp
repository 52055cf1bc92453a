#include "reordermon/hash.hpp"

namespace reordermon {

std::uint64_t hash_prefix(Prefix p, std::uint64_t seed) noexcept {
  return mix64(mix64(seed) ^ p.bits);
}

std::uint64_t hash_flow(const FlowId& f, std::uint64_t seed) noexcept {
  std::uint64_t ips = (static_cast<std::uint64_t>(f.src_ip) << 32) | f.dst_ip;
  std::uint64_t ports = (static_cast<std::uint64_t>(f.src_port) << 16) | f.dst_port;
  return mix64(mix64(mix64(seed) ^ ips) ^ ports);
}

}  // namespace reordermon
