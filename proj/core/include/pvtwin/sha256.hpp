#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pvtwin {

// Minimal FIPS 180-4 SHA-256, enough to fingerprint artifact files in stage
// manifests. Not a general-purpose crypto interface.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    // finalizes and returns lowercase hex; the object must not be reused
    std::string hex_digest();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t total_len_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
};

std::string sha256_hex(std::string_view data);
// empty string + ok=false when the file cannot be read
std::string sha256_file_hex(const std::string& path, bool& ok);

}  // namespace pvtwin
