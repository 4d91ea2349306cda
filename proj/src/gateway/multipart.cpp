#include "cxr/gateway/multipart.hpp"

#include <algorithm>
#include <cctype>

namespace cxr::gateway {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      out.push_back(s[i]);
    }
    return out;
  }
  return s;
}

// Splits on ';' outside double quotes.
std::vector<std::string> split_params(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') quoted = !quoted;
    if (c == '\\' && quoted && i + 1 < s.size()) {
      cur.push_back(c);
      cur.push_back(s[++i]);
      continue;
    }
    if (c == ';' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string ContentType::param(const std::string& name) const {
  auto it = params.find(name);
  return it == params.end() ? std::string{} : it->second;
}

ContentType parse_content_type(std::string_view header) {
  ContentType ct;
  auto pieces = split_params(header);
  ct.media_type = lower(trim(pieces[0]));
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const auto eq = pieces[i].find('=');
    if (eq == std::string::npos) continue;
    ct.params[lower(trim(std::string_view(pieces[i]).substr(0, eq)))] =
        unquote(trim(std::string_view(pieces[i]).substr(eq + 1)));
  }
  return ct;
}

std::string MultipartPart::header(const std::string& name) const {
  auto it = headers.find(name);
  return it == headers.end() ? std::string{} : it->second;
}

std::vector<MultipartPart> parse_multipart(std::string_view body, std::string_view boundary) {
  if (boundary.empty() || boundary.size() > 70) {
    throw MultipartError("boundary must be 1..70 characters");
  }
  const std::string dash = "--" + std::string(boundary);
  const std::string delim = "\r\n" + dash;

  std::size_t pos;
  if (body.substr(0, dash.size()) == dash) {
    pos = dash.size();
  } else {
    const auto first = body.find(delim);
    if (first == std::string_view::npos) throw MultipartError("opening boundary not found");
    pos = first + delim.size();
  }

  std::vector<MultipartPart> parts;
  while (true) {
    if (body.substr(pos, 2) == "--") return parts;  // close delimiter
    // Transport padding, then CRLF.
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
    if (body.substr(pos, 2) != "\r\n") throw MultipartError("malformed boundary line");
    pos += 2;

    const auto next = body.find(delim, pos);
    if (next == std::string_view::npos) throw MultipartError("close boundary not found");
    const auto part = body.substr(pos, next - pos);
    pos = next + delim.size();

    MultipartPart p;
    std::size_t header_end;
    if (part.substr(0, 2) == "\r\n") {
      header_end = 0;
      p.body = part.substr(2);
    } else {
      header_end = part.find("\r\n\r\n");
      if (header_end == std::string_view::npos) {
        throw MultipartError("part " + std::to_string(parts.size()) +
                             " lacks a header/body separator");
      }
      p.body = part.substr(header_end + 4);
    }
    std::size_t hpos = 0;
    while (hpos < header_end) {
      auto eol = part.find("\r\n", hpos);
      if (eol == std::string_view::npos || eol > header_end) eol = header_end;
      const auto line = part.substr(hpos, eol - hpos);
      hpos = eol + 2;
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw MultipartError("malformed header line in part " + std::to_string(parts.size()));
      }
      p.headers[lower(trim(line.substr(0, colon)))] = trim(line.substr(colon + 1));
    }
    parts.push_back(std::move(p));
  }
}

std::string build_multipart(const std::vector<std::string>& payloads, std::string_view boundary,
                            std::string_view part_type) {
  std::string out;
  for (const auto& payload : payloads) {
    out += "--" + std::string(boundary) + "\r\n";
    out += "Content-Type: " + std::string(part_type) + "\r\n\r\n";
    out += payload;
    out += "\r\n";
  }
  out += "--" + std::string(boundary) + "--\r\n";
  return out;
}

}  // namespace cxr::gateway
