#include "cxr/dicom/uid.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <memory>
#include <mutex>
#include <random>

#include "cxr/common/rng.hpp"

namespace cxr::dicom {

std::string uid_from_u128(std::uint64_t hi, std::uint64_t lo) {
  unsigned __int128 v = (static_cast<unsigned __int128>(hi) << 64) | lo;
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  } while (v != 0);
  std::reverse(digits.begin(), digits.end());
  return "2.25." + digits;
}

UidSource random_uid_source() {
  auto dev = std::make_shared<std::random_device>();
  auto mu = std::make_shared<std::mutex>();
  return [dev, mu] {
    std::lock_guard lock(*mu);
    auto word = [&] {
      return (static_cast<std::uint64_t>((*dev)()) << 32) | (*dev)();
    };
    const std::uint64_t hi = word();
    return uid_from_u128(hi, word());
  };
}

UidSource seeded_uid_source(std::uint64_t seed) {
  auto rng = std::make_shared<XorShift64Star>(seed);
  auto mu = std::make_shared<std::mutex>();
  return [rng, mu] {
    std::lock_guard lock(*mu);
    const std::uint64_t hi = rng->next();
    return uid_from_u128(hi, rng->next());
  };
}

Clock system_clock() {
  return [] { return std::chrono::system_clock::now(); };
}

Clock fixed_clock(std::chrono::system_clock::time_point t) {
  return [t] { return t; };
}

namespace {

std::tm utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  return tm;
}

}  // namespace

std::string format_da(std::chrono::system_clock::time_point t) {
  const auto tm = utc(t);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday);
  return buf;
}

std::string format_tm(std::chrono::system_clock::time_point t) {
  const auto tm = utc(t);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02d%02d%02d", tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::string format_iso8601(std::chrono::system_clock::time_point t) {
  const auto floored = std::chrono::floor<std::chrono::seconds>(t);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t - floored).count();
  const auto tm = utc(floored);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms));
  return buf;
}

}  // namespace cxr::dicom
