#pragma once

// File plumbing between the roles. Every artifact travels as a JSON
// envelope around its canonical binary encoding; the digest is always taken
// over the binary payload.
//
//   {"digest":"<sha256 hex>","msg_type":"...","payload":"<base64url>",
//    "role":"...","session_id":"<hex or empty>","version":1}

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zkfaith/bytes.hpp"

namespace zkfaith {

inline constexpr std::uint32_t kEnvelopeVersion = 1;

struct MessageType {
    std::string_view name;
    std::uint8_t tag;  // first payload byte; 0 when the encoding carries none
    std::string_view role;
    bool has_session;  // payload starts (after the header) with the session id
};

const std::vector<MessageType>& message_types();
const MessageType& message_type(std::string_view name);  // DecodeError if unknown

struct Envelope {
    std::uint32_t version = kEnvelopeVersion;
    std::string role;
    std::string msg_type;
    Bytes session_id;
    Bytes payload;

    // Role and session id are filled in from the registry and the payload.
    static Envelope wrap(std::string_view msg_type, Bytes payload);

    std::string to_json() const;
    // Strict: the text must be exactly what to_json would produce. Rejects
    // unknown types (DecodeError), other versions (VersionError), digest or
    // role/session inconsistencies (IntegrityError).
    static Envelope from_json(std::string_view text);

    // DecodeError unless msg_type is `expected`.
    const Bytes& expect(std::string_view expected) const;
};

std::string read_text(const std::filesystem::path& p);  // UsageError if missing
// Written to a temporary sibling and renamed into place.
void write_text(const std::filesystem::path& p, std::string_view text);

Envelope read_envelope(const std::filesystem::path& p);
void write_envelope(const std::filesystem::path& p, const Envelope& e);

// Exclusive advisory lock on "<path>.lock", held for the object's lifetime.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& p, bool wait = true);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
    bool held() const { return fd_ >= 0; }

private:
    int fd_ = -1;
};

}  // namespace zkfaith
