#include "zkfaith/wire.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "zkfaith/codec.hpp"
#include "zkfaith/errors.hpp"
#include "zkfaith/hash.hpp"

namespace zkfaith {

using nlohmann::json;

const std::vector<MessageType>& message_types() {
    static const std::vector<MessageType> all = {
        {"params", 0x00, "setup", false},
        {"commitment", 0x10, "wallet", false},
        {"position-proof", 0x11, "wallet", false},
        {"cl-secret-key", 0x20, "issuer", false},
        {"cl-public-key", 0x21, "issuer", false},
        {"signature", 0x22, "issuer", false},
        {"opening-proof", 0x30, "wallet", false},
        {"range-proof", 0x31, "wallet", false},
        {"presentation-proof", 0x32, "wallet", false},
        {"update-link", 0x33, "wallet", false},
        {"registry", 0x40, "issuer", false},
        {"epoch-list", 0x41, "issuer", false},
        {"non-membership", 0x42, "wallet", false},
        {"authority-key", 0x50, "authority", false},
        {"auth-response", 0x51, "authority", false},
        {"directory", 0x52, "issuer", false},
        {"issue-query", 0x53, "wallet", true},
        {"issue-request", 0x54, "wallet", true},
        {"serial-offer", 0x55, "issuer", true},
        {"serial-commit", 0x56, "wallet", true},
        {"issue-response", 0x57, "issuer", true},
        {"update-request", 0x58, "wallet", true},
        {"credential", 0x59, "wallet", false},
        {"presentation", 0x5A, "wallet", false},
        {"wallet", 0x5B, "wallet", false},
        {"issuer", 0x5C, "issuer", false},
        {"verifier", 0x5D, "verifier", false},
        {"authority-public-key", 0x5E, "authority", false},
    };
    return all;
}

const MessageType& message_type(std::string_view name) {
    for (const auto& t : message_types()) {
        if (t.name == name) return t;
    }
    throw DecodeError("unknown msg_type '" + std::string(name) + "'", 0);
}

namespace {

// Session id of a session-bearing payload. An issue request nests the
// query, whose session comes after the authority response.
Bytes session_of(const MessageType& t, std::span<const std::uint8_t> payload) {
    if (!t.has_session) return {};
    ByteReader r(payload);
    r.raw(2);
    if (t.name == "issue-request") {
        r.bytes();
        Bytes q = r.bytes();
        ByteReader rq(q);
        rq.raw(2);
        return rq.bytes();
    }
    return r.bytes();
}

std::string digest_hex(std::span<const std::uint8_t> payload) { return to_hex(sha256(payload)); }

}  // namespace

Envelope Envelope::wrap(std::string_view msg_type, Bytes payload) {
    const auto& t = message_type(msg_type);
    if (t.tag != 0 && (payload.empty() || payload[0] != t.tag)) {
        throw UsageError("payload is not a " + std::string(msg_type));
    }
    Envelope e;
    e.role = std::string(t.role);
    e.msg_type = std::string(t.name);
    e.session_id = session_of(t, payload);
    e.payload = std::move(payload);
    return e;
}

std::string Envelope::to_json() const {
    json j = {{"version", version},           {"role", role},
              {"msg_type", msg_type},         {"session_id", to_hex(session_id)},
              {"payload", base64url_encode(payload)}, {"digest", digest_hex(payload)}};
    return j.dump();
}

Envelope Envelope::from_json(std::string_view text) {
    std::string_view body = text;
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw DecodeError(std::string("envelope is not JSON: ") + e.what(), 0);
    }
    auto field = [&](const char* k) -> const json& {
        if (!j.is_object() || !j.contains(k)) throw DecodeError(std::string("envelope lacks '") + k + "'", 0);
        return j.at(k);
    };
    const auto& v = field("version");
    if (!v.is_number_unsigned()) throw DecodeError("envelope version is not a number", 0);
    if (v.get<std::uint64_t>() != kEnvelopeVersion) {
        throw VersionError("envelope version " + v.dump() + ", expected " + std::to_string(kEnvelopeVersion));
    }
    for (const char* k : {"role", "msg_type", "session_id", "payload", "digest"}) {
        if (!field(k).is_string()) throw DecodeError(std::string("envelope field '") + k + "' is not a string", 0);
    }
    if (j.size() != 6) throw DecodeError("envelope has extra fields", 0);
    if (j.dump() != body) throw IntegrityError("envelope text is not canonical");

    const auto& t = message_type(j["msg_type"].get<std::string>());
    Envelope e;
    e.msg_type = std::string(t.name);
    e.role = j["role"].get<std::string>();
    e.payload = base64url_decode(j["payload"].get<std::string>());
    if (j["digest"].get<std::string>() != digest_hex(e.payload)) throw IntegrityError("payload digest mismatch");
    if (e.role != t.role) throw IntegrityError("role '" + e.role + "' does not produce " + e.msg_type);
    if (t.tag != 0 && (e.payload.empty() || e.payload[0] != t.tag)) {
        throw DecodeError("payload header does not match " + e.msg_type, 0);
    }
    const auto& sid = j["session_id"].get<std::string>();
    Bytes expect_sid = session_of(t, e.payload);
    if (sid != to_hex(expect_sid)) throw IntegrityError("session id does not match the payload");
    e.session_id = std::move(expect_sid);
    return e;
}

const Bytes& Envelope::expect(std::string_view expected) const {
    if (msg_type != expected) throw DecodeError("expected " + std::string(expected) + ", got " + msg_type, 0);
    return payload;
}

std::string base64url_encode(std::span<const std::uint8_t> b) {
    const int variant = sodium_base64_VARIANT_URLSAFE_NO_PADDING;
    std::string out(sodium_base64_encoded_len(b.size(), variant), '\0');
    sodium_bin2base64(out.data(), out.size(), b.data(), b.size(), variant);
    out.resize(std::strlen(out.c_str()));
    return out;
}

Bytes base64url_decode(std::string_view s) {
    Bytes out(s.size() * 3 / 4 + 3);
    std::size_t n = 0;
    const char* end = nullptr;
    if (sodium_base642bin(out.data(), out.size(), s.data(), s.size(), nullptr, &n, &end,
                          sodium_base64_VARIANT_URLSAFE_NO_PADDING) != 0 ||
        end != s.data() + s.size()) {
        throw DecodeError("bad base64url", end ? static_cast<std::size_t>(end - s.data()) : 0);
    }
    out.resize(n);
    // unused trailing bits would give a second spelling of the same bytes
    if (base64url_encode(out) != s) throw DecodeError("non-canonical base64url", s.size());
    return out;
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw UsageError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& p, std::string_view text) {
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + p.string());
        out << text;
        if (!out.flush()) throw UsageError("write failed for " + p.string());
    }
    std::filesystem::rename(tmp, p);
}

Envelope read_envelope(const std::filesystem::path& p) { return Envelope::from_json(read_text(p)); }

void write_envelope(const std::filesystem::path& p, const Envelope& e) { write_text(p, e.to_json() + "\n"); }

FileLock::FileLock(const std::filesystem::path& p, bool wait) {
    auto lock = p;
    lock += ".lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) throw UsageError("cannot open lock " + lock.string());
    if (::flock(fd_, LOCK_EX | (wait ? 0 : LOCK_NB)) != 0) {
        ::close(fd_);
        fd_ = -1;
        if (wait) throw UsageError("cannot lock " + p.string());
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

}  // namespace zkfaith
