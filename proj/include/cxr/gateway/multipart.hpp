#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cxr::gateway {

class MultipartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Media type (lowercased) and parameters (names lowercased, values unquoted).
struct ContentType {
  std::string media_type;
  std::map<std::string, std::string> params;

  std::string param(const std::string& name) const;
};

ContentType parse_content_type(std::string_view header);

struct MultipartPart {
  std::map<std::string, std::string> headers;  // lowercased names
  std::string_view body;

  std::string header(const std::string& name) const;
};

/// Splits a multipart body (RFC 2046) on `boundary`. Views point into
/// `body`. Throws MultipartError on a missing delimiter, a missing close
/// delimiter or a part without a header/body separator.
std::vector<MultipartPart> parse_multipart(std::string_view body, std::string_view boundary);

/// multipart/related body with one part per payload.
std::string build_multipart(const std::vector<std::string>& payloads, std::string_view boundary,
                            std::string_view part_type = "application/dicom");

}  // namespace cxr::gateway
