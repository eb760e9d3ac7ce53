#pragma once

#include <string>

namespace epsim {

/// SHA-1 digest of a byte string, lowercase hex.
std::string sha1_hex(const std::string& bytes);

/// Hash of the content as git computes it for a blob object:
/// sha1("blob <size>\0" + content).
std::string git_blob_sha1(const std::string& content);

}  // namespace epsim
