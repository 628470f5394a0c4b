// zkfaith: drives the four roles through files.
//
// Exit codes
//   0        success
//   1        internal error
//   2        usage: bad flags, missing or unreadable files
//   3        malformed input: decode, version or digest failure
//   4        schema or configuration error
//   5        the wallet refused: policy, unsatisfiable or oversized predicate
//   6        an experiment did not pass
//   10 + r   protocol rejection with reason code r (see `Reason`)

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "zkfaith/protocol.hpp"
#include "zkfaith/sim.hpp"
#include "zkfaith/wire.hpp"

using namespace zkfaith;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kMalformed = 3,
    kSchema = 4,
    kRefused = 5,
    kExperimentFailed = 6,
    kProtocolBase = 10,
};

struct Options {
    std::string pp, state, out, seed, backend = "curve", level = "standard", schemas;
    std::vector<std::string> in;
    // per command
    std::string role, wid, id, today, nonce, credential, field, value, serial, registry, kind, strategy = "all";
    std::uint64_t trials = 100, pairs = 1000;
    unsigned threads = 1;
    bool force = false;
};

// ---- inputs

struct Inputs {
    std::map<std::string, Envelope> envelopes;  // by msg_type
    std::vector<std::pair<fs::path, json>> plain;

    const Envelope* find(std::string_view t) const {
        auto it = envelopes.find(std::string(t));
        return it == envelopes.end() ? nullptr : &it->second;
    }
    const Bytes& need(std::string_view t) const {
        if (auto* e = find(t)) return e->payload;
        throw UsageError("missing --in file of type " + std::string(t));
    }
    std::optional<std::string> plain_with(const char* key) const {
        for (const auto& [p, j] : plain) {
            if (j.is_object() && j.contains(key)) return j.dump();
        }
        return std::nullopt;
    }
};

Inputs load_inputs(const std::vector<std::string>& files) {
    Inputs in;
    for (const auto& f : files) {
        auto text = read_text(f);
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw DecodeError(f + " is not JSON", 0);
        bool envelope = j.is_object() && (j.contains("msg_type") || j.contains("payload") || j.contains("digest"));
        if (envelope) {
            auto e = Envelope::from_json(text);
            in.envelopes.insert_or_assign(e.msg_type, std::move(e));
        } else {
            in.plain.emplace_back(f, std::move(j));
        }
    }
    return in;
}

Rng make_rng(const Options& o) {
    if (o.seed.empty()) return Rng::system();
    return Rng(from_hex(o.seed));
}

PublicParams load_pp(const Options& o) {
    if (o.pp.empty()) throw UsageError("--pp is required");
    return PublicParams::decode(read_envelope(o.pp).expect("params"));
}

const SchemaRegistry& load_schemas(const Options& o) {
    if (o.schemas.empty()) return SchemaRegistry::builtin();
    static SchemaRegistry reg = SchemaRegistry::load_dir(o.schemas);
    return reg;
}

const fs::path& need_state(const Options& o) {
    static fs::path p;
    if (o.state.empty()) throw UsageError("--state is required");
    p = o.state;
    return p;
}

void emit(const Options& o, std::string_view type, Bytes payload) {
    if (o.out.empty()) throw UsageError("--out is required");
    write_envelope(o.out, Envelope::wrap(type, std::move(payload)));
}

void save_state(const fs::path& p, std::string_view type, Bytes payload) {
    write_envelope(p, Envelope::wrap(type, std::move(payload)));
}

std::int64_t parse_today(const Options& o) { return o.today.empty() ? today_days() : parse_date(o.today); }

Criterion load_criterion(const Inputs& in) {
    auto text = in.plain_with("verifier");
    if (!text) throw UsageError("missing --in criterion file (JSON with \"verifier\")");
    return Criterion::from_json(*text);
}

// ---- commands

int cmd_setup(const Options& o) {
    auto pp = setup(parse_level(o.level), parse_backend(o.backend));
    emit(o, "params", pp.encode());
    std::cout << "backend=" << to_string(pp.backend()) << " level=" << to_string(pp.level) << "\n";
    return kOk;
}

int cmd_keygen(const Options& o) {
    const auto& state = need_state(o);
    if (fs::exists(state) && !o.force) throw UsageError(state.string() + " exists; pass --force to replace it");
    Rng rng = make_rng(o);
    if (o.role == "authority") {
        auto key = AuthorityKey::generate(rng);
        save_state(state, "authority-key", key.encode());
        if (!o.out.empty()) emit(o, "authority-public-key", key.encode_public());
    } else if (o.role == "issuer") {
        auto pp = load_pp(o);
        auto in = load_inputs(o.in);
        auto apk = AuthorityKey::decode_public(in.need("authority-public-key"));
        auto issuer = Issuer::create(pp, load_schemas(o), apk, rng);
        save_state(state, "issuer", issuer.encode());
        if (!o.out.empty()) emit(o, "directory", issuer.directory().encode());
    } else if (o.role == "verifier") {
        auto pp = load_pp(o);
        auto in = load_inputs(o.in);
        auto dir = IssuerDirectory::decode(pp, in.need("directory"));
        if (o.id.empty()) throw UsageError("--id is required for a verifier");
        Verifier v(dir, load_schemas(o), o.id);
        save_state(state, "verifier", v.encode());
    } else if (o.role == "wallet") {
        auto pp = load_pp(o);
        if (o.wid.empty()) throw UsageError("--wid is required for a wallet");
        save_state(state, "wallet", Wallet(pp, o.wid).encode());
    } else {
        throw UsageError("--role must be authority, issuer, verifier or wallet");
    }
    return kOk;
}

int cmd_auth(const Options& o) {
    auto key = AuthorityKey::decode(read_envelope(need_state(o)).expect("authority-key"));
    auto in = load_inputs(o.in);
    auto text = in.plain_with("fields");
    if (!text) throw UsageError("missing --in document file (JSON with \"fields\")");
    const auto& schemas = load_schemas(o);
    auto r = faith_auth(key, schemas, Document::from_json(*text, schemas), parse_today(o));
    emit(o, "auth-response", r.encode());
    std::cout << "verdict=" << (r.verdict ? 1 : 0) << "\n";
    return kOk;
}

// Wallet side of issuance; what it does depends on what arrived.
int cmd_request(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    Wallet w = Wallet::decode(pp, read_envelope(state).expect("wallet"));
    auto in = load_inputs(o.in);
    auto dir = IssuerDirectory::decode(pp, in.need("directory"));
    const auto& schemas = load_schemas(o);
    Rng rng = make_rng(o);

    if (in.find("serial-offer")) {
        auto offer = SerialOffer::decode(pp.group(), in.need("serial-offer"));
        auto sc = w.accept_offer(dir, offer, rng);
        emit(o, "serial-commit", sc.encode());
    } else if (in.find("issue-response")) {
        auto resp = IssueResponse::decode(pp.group(), in.need("issue-response"));
        const auto& c = w.complete(dir, resp);
        std::cout << "credential=" << to_hex(c.id()) << " schema=" << c.schema_id << "\n";
    } else {
        auto r = AuthResponse::decode(in.need("auth-response"));
        auto text = in.plain_with("fields");
        if (!text) throw UsageError("missing --in document file (JSON with \"fields\")");
        auto doc = Document::from_json(*text, schemas);
        auto q = faith_ask(w, dir, schemas.get(doc.schema_id), doc, r, rng);
        emit(o, "issue-request", IssueRequest{r, q}.encode());
    }
    save_state(state, "wallet", w.encode());
    return kOk;
}

int cmd_issue(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    Issuer issuer = Issuer::decode(pp, read_envelope(state).expect("issuer"));
    auto in = load_inputs(o.in);
    Rng rng = make_rng(o);

    if (in.find("issue-request")) {
        auto req = IssueRequest::decode(pp.group(), in.need("issue-request"));
        auto offer = issuer.begin_issue(req.auth, req.query, rng);
        emit(o, "serial-offer", offer.encode());
        std::cout << "serial=" << offer.serial.to_string() << "\n";
    } else if (in.find("update-request")) {
        auto req = UpdateRequest::decode(pp.group(), in.need("update-request"));
        auto offer = issuer.begin_update(req, rng);
        emit(o, "serial-offer", offer.encode());
        std::cout << "serial=" << offer.serial.to_string() << " replaces=" << req.old_serial.to_string() << "\n";
    } else if (in.find("serial-commit")) {
        auto sc = SerialCommit::decode(pp.group(), in.need("serial-commit"));
        emit(o, "issue-response", issuer.finish(sc, rng).encode());
        std::cout << "issued=" << issuer.issued() << "\n";
    } else {
        throw UsageError("issue needs an issue-request, update-request or serial-commit");
    }
    save_state(state, "issuer", issuer.encode());
    return kOk;
}

const Credential& pick_credential(const Wallet& w, const std::string& prefix, const std::string& schema_id) {
    const Credential* found = nullptr;
    for (const auto& c : w.credentials()) {
        if (!prefix.empty()) {
            if (to_hex(c.id()).rfind(prefix, 0) != 0) continue;
            if (found) throw UsageError("credential prefix '" + prefix + "' is ambiguous");
            found = &c;
        } else if (schema_id.empty() || c.schema_id == schema_id) {
            found = &c;  // newest wins
        }
    }
    if (!found) throw UsageError("no matching credential in wallet");
    return *found;
}

int cmd_show(const Options& o) {
    auto pp = load_pp(o);
    Wallet w = Wallet::decode(pp, read_envelope(need_state(o)).expect("wallet"));
    auto in = load_inputs(o.in);
    auto dir = IssuerDirectory::decode(pp, in.need("directory"));
    auto epoch = EpochList::decode(pp.group(), in.need("epoch-list"));
    auto phi = load_criterion(in);
    Rng rng = make_rng(o);
    Bytes nonce = o.nonce.empty() ? Bytes{} : from_hex(o.nonce);
    if (nonce.empty()) {
        nonce.resize(16);
        rng.fill(nonce);
    }
    const auto& cred = pick_credential(w, o.credential, phi.schema_id);
    auto pres = faith_show(dir, load_schemas(o).get(phi.schema_id), cred, phi, epoch, nonce, rng);
    emit(o, "presentation", pres.encode());
    return kOk;
}

int cmd_verify(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    auto in = load_inputs(o.in);
    auto dir = IssuerDirectory::decode(pp, in.need("directory"));
    const auto& schemas = load_schemas(o);
    Verifier v = Verifier::decode(dir, schemas, read_envelope(state).expect("verifier"));
    auto pres = Presentation::decode(pp.group(), in.need("presentation"));
    auto epoch = EpochList::decode(pp.group(), in.need("epoch-list"));
    auto phi = load_criterion(in);

    auto out = v.verify(pres, phi, epoch);
    json result = {{"accepted", out.accepted}};
    if (out.reason) result["reason"] = to_string(*out.reason);
    if (!out.detail.empty()) result["detail"] = out.detail;
    json disclosed = json::object();
    for (const auto& [name, value] : out.disclosed) disclosed[name] = value.to_string();
    result["disclosed"] = disclosed;
    if (!o.out.empty()) write_text(o.out, result.dump(2) + "\n");
    if (out.accepted) {
        save_state(state, "verifier", v.encode());
        std::cout << "accepted\n";
        return kOk;
    }
    std::cerr << "rejected: " << to_string(*out.reason) << (out.detail.empty() ? "" : ": " + out.detail) << "\n";
    return kProtocolBase + static_cast<int>(*out.reason);
}

FieldValue parse_value(const Schema& s, const std::string& field, const std::string& text) {
    switch (s.field(field).type) {
        case FieldType::text:
            return text;
        case FieldType::integer:
            return static_cast<std::int64_t>(std::stoll(text));
        case FieldType::date:
            return text.find('-', 1) != std::string::npos ? parse_date(text) : std::stoll(text);
    }
    return text;
}

int cmd_update(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    Wallet w = Wallet::decode(pp, read_envelope(state).expect("wallet"));
    auto in = load_inputs(o.in);
    auto dir = IssuerDirectory::decode(pp, in.need("directory"));
    const auto& cred = pick_credential(w, o.credential, "");
    const auto& schema = load_schemas(o).get(cred.schema_id);
    if (o.field.empty()) throw UsageError("--field is required");
    // reserved names go through untouched so the wallet can refuse them
    bool reserved = o.field == "wid" || o.field == "serial";
    FieldValue value = reserved ? FieldValue{o.value} : parse_value(schema, o.field, o.value);
    Rng rng = make_rng(o);
    auto req = w.begin_update(dir, schema, cred.id(), o.field, value, rng);
    emit(o, "update-request", req.encode());
    save_state(state, "wallet", w.encode());
    return kOk;
}

int cmd_revoke(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    Issuer issuer = Issuer::decode(pp, read_envelope(state).expect("issuer"));
    if (o.serial.empty()) throw UsageError("--serial is required");
    mpz_class v;
    if (v.set_str(o.serial, 10) != 0) throw UsageError("--serial must be a decimal number");
    bool fresh = issuer.revoke(Scalar(pp.group(), v));
    save_state(state, "issuer", issuer.encode());
    std::cout << (fresh ? "revoked" : "already revoked") << " (effective at the next publication)\n";
    return kOk;
}

int cmd_publish(const Options& o) {
    auto pp = load_pp(o);
    const auto& state = need_state(o);
    FileLock lock(state);
    Issuer issuer = Issuer::decode(pp, read_envelope(state).expect("issuer"));
    auto list = issuer.publish_epoch();
    save_state(state, "issuer", issuer.encode());
    emit(o, "epoch-list", list->encode());
    if (!o.registry.empty()) write_envelope(o.registry, Envelope::wrap("registry", issuer.registry().encode()));
    std::cout << "epoch=" << list->epoch << " revoked=" << list->tags.size() << "\n";
    return kOk;
}

int cmd_experiment(const Options& o) {
    auto pp = setup(parse_level(o.level), parse_backend(o.backend));
    std::uint64_t seed = o.seed.empty() ? 1 : std::stoull(o.seed, nullptr, 16);
    std::vector<std::string> lines;
    bool ok = true;
    if (o.kind == "upriv") {
        std::vector<std::string> ids;
        if (o.strategy == "all") {
            for (const auto& s : strategies()) ids.push_back(s.id);
        } else {
            ids.push_back(find_strategy(o.strategy).id);
        }
        for (const auto& id : ids) {
            auto r = run_upriv_experiment(pp, id, o.trials, seed, o.threads);
            ok = ok && r.pass;
            lines.push_back(r.report_line());
            std::cout << lines.back() << "\n";
        }
    } else if (o.kind == "unlinkability") {
        auto r = run_unlinkability_trial(pp, o.pairs, seed);
        ok = r.pass;
        lines.push_back(r.report_line());
        std::cout << lines.back() << "\n";
    } else {
        throw UsageError("experiment kind must be upriv or unlinkability");
    }
    if (!o.out.empty()) {
        std::string text;
        for (const auto& l : lines) text += l + "\n";
        write_text(o.out, text);
    }
    return ok ? kOk : kExperimentFailed;
}

int run(const std::function<int()>& f) {
    try {
        return f();
    } catch (const ProtocolError& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kProtocolBase + static_cast<int>(e.reason());
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const DecodeError& e) {
        std::cerr << "malformed: " << e.what() << "\n";
        return kMalformed;
    } catch (const VersionError& e) {
        std::cerr << "malformed: " << e.what() << "\n";
        return kMalformed;
    } catch (const IntegrityError& e) {
        std::cerr << "malformed: " << e.what() << "\n";
        return kMalformed;
    } catch (const SchemaError& e) {
        std::cerr << "schema: " << e.what() << "\n";
        return kSchema;
    } catch (const ConfigError& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kSchema;
    } catch (const PolicyError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const CannotSatisfyError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const CapacityError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const RedundantPredicateError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zkfaith: anonymous credentials over files"};
    app.require_subcommand(1);
    Options o;
    int code = kOk;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--pp", o.pp, "public parameters file");
        sc->add_option("--state", o.state, "role state file");
        sc->add_option("--in", o.in, "input files")->expected(1, -1);
        sc->add_option("--out", o.out, "output file");
        sc->add_option("--seed", o.seed, "hex seed (random when absent)");
        sc->add_option("--backend", o.backend, "curve or mock")->check(CLI::IsMember({"curve", "mock"}));
        sc->add_option("--schemas", o.schemas, "schema directory (built-in set by default)");
    };
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* sc = app.add_subcommand(name, help);
        common(sc);
        sc->callback([&o, &code, fn] { code = run([&] { return fn(o); }); });
        return sc;
    };

    auto* s_setup = add("setup", "generate public parameters", cmd_setup);
    s_setup->add_option("--level", o.level, "standard or toy")->check(CLI::IsMember({"standard", "toy"}));
    auto* s_key = add("keygen", "create a role's state", cmd_keygen);
    s_key->add_option("--role", o.role, "authority, issuer, verifier or wallet")->required();
    s_key->add_option("--wid", o.wid, "wallet id");
    s_key->add_option("--id", o.id, "verifier id");
    s_key->add_flag("--force", o.force, "replace an existing state file");
    auto* s_auth = add("auth", "authority: check a document and sign the verdict", cmd_auth);
    s_auth->add_option("--today", o.today, "reference date YYYY-MM-DD");
    add("request", "wallet: ask for a credential, answer an offer, or store the result", cmd_request);
    add("issue", "issuer: answer a request, update or serial commitment", cmd_issue);
    auto* s_show = add("show", "wallet: present a credential", cmd_show);
    s_show->add_option("--nonce", o.nonce, "verifier nonce, hex");
    s_show->add_option("--credential", o.credential, "credential id prefix");
    add("verify", "verifier: check a presentation", cmd_verify);
    auto* s_upd = add("update", "wallet: request a changed credential", cmd_update);
    s_upd->add_option("--credential", o.credential, "credential id prefix");
    s_upd->add_option("--field", o.field, "field to change");
    s_upd->add_option("--value", o.value, "new value");
    auto* s_rev = add("revoke", "issuer: revoke a serial", cmd_revoke);
    s_rev->add_option("--serial", o.serial, "serial, decimal");
    auto* s_pub = add("publish-epoch", "issuer: publish the next revocation list", cmd_publish);
    s_pub->add_option("--registry", o.registry, "also write the full registry");
    auto* s_exp = add("experiment", "run adversary experiments", cmd_experiment);
    s_exp->add_option("kind", o.kind, "upriv or unlinkability")->required();
    s_exp->add_option("--strategy", o.strategy, "strategy id or 'all'");
    s_exp->add_option("--trials", o.trials, "trials per strategy");
    s_exp->add_option("--pairs", o.pairs, "presentation pairs");
    s_exp->add_option("--threads", o.threads, "worker threads");
    s_exp->add_option("--level", o.level, "standard or toy")->check(CLI::IsMember({"standard", "toy"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    return code;
}
