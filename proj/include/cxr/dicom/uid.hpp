#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

namespace cxr::dicom {

/// Produces fresh UIDs. Injectable so tests get reproducible objects.
using UidSource = std::function<std::string()>;
using Clock = std::function<std::chrono::system_clock::time_point()>;

/// "2.25." followed by the decimal value of a 128-bit integer.
std::string uid_from_u128(std::uint64_t hi, std::uint64_t lo);

/// 128 bits from std::random_device per call.
UidSource random_uid_source();

/// Deterministic sequence of UIDs from an xorshift64* stream.
UidSource seeded_uid_source(std::uint64_t seed);

Clock system_clock();
Clock fixed_clock(std::chrono::system_clock::time_point t);

/// DICOM DA ("YYYYMMDD") and TM ("HHMMSS") renderings in UTC.
std::string format_da(std::chrono::system_clock::time_point t);
std::string format_tm(std::chrono::system_clock::time_point t);
/// ISO-8601 UTC with millisecond precision, e.g. "2024-03-01T12:00:00.000Z".
std::string format_iso8601(std::chrono::system_clock::time_point t);

}  // namespace cxr::dicom
