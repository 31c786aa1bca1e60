#include "bgptopo/types.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace bgptopo {

IpAddress IpAddress::v4(std::uint32_t host_order) {
  IpAddress out;
  out.is_v4 = true;
  out.bytes[0] = static_cast<std::uint8_t>(host_order >> 24);
  out.bytes[1] = static_cast<std::uint8_t>(host_order >> 16);
  out.bytes[2] = static_cast<std::uint8_t>(host_order >> 8);
  out.bytes[3] = static_cast<std::uint8_t>(host_order);
  return out;
}

std::uint32_t IpAddress::v4_host_order() const {
  return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
         (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
}

IpAddress IpAddress::from_string(const std::string& text) {
  IpAddress out;
  in_addr a4{};
  if (inet_pton(AF_INET, text.c_str(), &a4) == 1) {
    out.is_v4 = true;
    std::memcpy(out.bytes.data(), &a4, 4);
    return out;
  }
  in6_addr a6{};
  if (inet_pton(AF_INET6, text.c_str(), &a6) == 1) {
    out.is_v4 = false;
    std::memcpy(out.bytes.data(), &a6, 16);
    return out;
  }
  throw Error("invalid IP address: " + text);
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  if (is_v4) {
    in_addr a4{};
    std::memcpy(&a4, bytes.data(), 4);
    inet_ntop(AF_INET, &a4, buf, sizeof(buf));
  } else {
    in6_addr a6{};
    std::memcpy(&a6, bytes.data(), 16);
    inet_ntop(AF_INET6, &a6, buf, sizeof(buf));
  }
  return buf;
}

Prefix Prefix::make(std::uint32_t addr_host_order, std::uint8_t length) {
  if (length > 32) throw Error("prefix length out of range");
  const std::uint32_t mask =
      length == 0 ? 0 : ~std::uint32_t{0} << (32 - length);
  return Prefix{addr_host_order & mask, length};
}

Prefix Prefix::from_string(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos)
    throw Error("prefix missing '/': " + text);
  const std::string addr_part = text.substr(0, slash);
  const std::string len_part = text.substr(slash + 1);

  unsigned len = 0;
  auto [p, ec] =
      std::from_chars(len_part.data(), len_part.data() + len_part.size(), len);
  if (ec != std::errc{} || p != len_part.data() + len_part.size() || len > 32)
    throw Error("invalid prefix length: " + text);

  // Accepts truncated dotted quads ("205.162.1/24") as found in
  // classic BGP notation.
  std::uint32_t addr = 0;
  int octets = 0;
  std::size_t pos = 0;
  while (pos <= addr_part.size()) {
    const auto dot = addr_part.find('.', pos);
    const std::string part = addr_part.substr(
        pos, dot == std::string::npos ? std::string::npos : dot - pos);
    unsigned octet = 0;
    auto [q, ec2] =
        std::from_chars(part.data(), part.data() + part.size(), octet);
    if (ec2 != std::errc{} || q != part.data() + part.size() || octet > 255 ||
        part.empty() || octets >= 4)
      throw Error("invalid prefix address: " + text);
    addr = (addr << 8) | octet;
    ++octets;
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  addr <<= 8 * (4 - octets);
  return make(addr, static_cast<std::uint8_t>(len));
}

std::string Prefix::to_string() const {
  std::string out;
  out.reserve(18);
  for (int i = 3; i >= 0; --i) {
    out += std::to_string((addr >> (8 * i)) & 0xff);
    out += i == 0 ? '/' : '.';
  }
  out += std::to_string(length);
  return out;
}

AsPath AsPath::sequence(std::vector<AsNum> asns) {
  AsPath p;
  p.segments.push_back({PathSegment::Kind::Sequence, std::move(asns)});
  return p;
}

}  // namespace bgptopo
