// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "consensus/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/crypto.hpp"

namespace chainguard::consensus {

namespace {

struct Ident {
  wallet::Seed seed;
  Address address;
  PublicKey public_key;
};

using Identities = std::map<std::string, Ident>;

[[noreturn]] void bad(const std::string& why) { throw DecodeError("scenario: " + why); }

std::uint64_t u64_or(const Json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned()) bad(std::string(key) + " must be a non-negative integer");
  return j[key].get<std::uint64_t>();
}

std::optional<std::uint64_t> opt_u64(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return u64_or(j, key, 0);
}

std::string str_of(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) bad(std::string("missing string '") + key + "'");
  return j[key].get<std::string>();
}

const Ident& ident(const Identities& ids, std::string name) {
  if (!name.empty() && name.front() == '@') name.erase(0, 1);
  auto it = ids.find(name);
  if (it == ids.end()) bad("unknown identity '" + name + "'");
  return it->second;
}

Address address_of(const Identities& ids, const std::string& text) {
  if (auto a = Address::parse(text)) return *a;
  return ident(ids, text).address;
}

// Replaces "@name" strings with addresses; account entries expand fully.
Json expand(const Json& j, const Identities& ids, bool in_accounts) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.size() < 2 || s.front() != '@') return j;
    const auto& id = ident(ids, s);
    if (in_accounts) return Json{{"address", id.address.hex()}, {"public_key", id.public_key.hex()}};
    return id.address.hex();
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(expand(v, ids, in_accounts));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = expand(v, ids, k == "accounts");
    return out;
  }
  return j;
}

std::vector<std::size_t> node_list(const Json& j) {
  if (!j.is_array()) bad("partition group must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) bad("partition group members are validator indices");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

FaultSchedule parse_faults(const Json& j, std::size_t n) {
  FaultSchedule f;
  if (j.is_null()) return f;
  if (!j.is_object()) bad("faults must be an object");
  auto check_node = [n](std::uint64_t i) {
    if (i >= n) bad("fault refers to validator " + std::to_string(i) + " of " + std::to_string(n));
    return static_cast<std::size_t>(i);
  };
  for (const auto& c : j.value("crashes", Json::array())) {
    CrashRule r;
    if (!c.contains("node")) bad("crash without node");
    r.node = check_node(u64_or(c, "node", 0));
    r.at = u64_or(c, "at", 0);
    r.recover_at = opt_u64(c, "recover_at");
    if (r.recover_at && *r.recover_at <= r.at) bad("recover_at must come after at");
    f.crashes.push_back(r);
  }
  for (const auto& p : j.value("partitions", Json::array())) {
    PartitionRule r;
    r.from = u64_or(p, "from", 0);
    r.to = u64_or(p, "to", 0);
    if (r.to <= r.from) bad("partition needs from < to");
    for (const auto& g : p.value("groups", Json::array())) {
      r.groups.push_back(node_list(g));
      for (auto i : r.groups.back()) check_node(i);
    }
    f.partitions.push_back(std::move(r));
  }
  for (const auto& d : j.value("drops", Json::array())) {
    DropRule r;
    r.from = u64_or(d, "from", 0);
    r.to = u64_or(d, "to", 0);
    if (r.to <= r.from) bad("drop rule needs from < to");
    if (auto s = opt_u64(d, "src")) r.src = check_node(*s);
    if (auto s = opt_u64(d, "dst")) r.dst = check_node(*s);
    const auto pm = u64_or(d, "per_million", 1'000'000);
    if (pm > 1'000'000) bad("per_million is at most 1000000");
    r.per_million = static_cast<std::uint32_t>(pm);
    f.drops.push_back(r);
  }
  return f;
}

Payload build_op(const Json& w, const Identities& ids, const std::string& op, const Ident& signer,
                 const std::string& signer_name) {
  if (op == "register") {
    RegisterUser p;
    p.user = signer.address;
    p.public_key = signer.public_key;
    p.password_digest = crypto::sha256("sim:" + signer_name);
    p.org = str_of(w, "org");
    p.requested_role = str_of(w, "role");
    return p;
  }
  if (op == "update_role") {
    UpdateUserRole p;
    p.user = w.contains("user") ? address_of(ids, str_of(w, "user")) : signer.address;
    p.org = str_of(w, "org");
    p.old_role = w.value("old_role", std::string(kNoRole));
    p.new_role = str_of(w, "new_role");
    return p;
  }
  if (op == "grant" || op == "revoke") {
    Permission perm{str_of(w, "resource"), str_of(w, "action")};
    if (op == "grant") return GrantPermission{str_of(w, "org"), str_of(w, "role"), perm};
    return RevokePermission{str_of(w, "org"), str_of(w, "role"), perm};
  }
  bad("unknown op '" + op + "'");
}

}  // namespace

wallet::Seed derived_identity_seed(std::string_view name) {
  const auto d = crypto::sha256("chainguard/sim-identity/v1:" + std::string(name));
  wallet::Seed s;
  std::copy(d.bytes.begin(), d.bytes.end(), s.begin());
  return s;
}

Result<Scenario> parse_scenario(const Json& j, const std::string& base_dir) {
  try {
    if (!j.is_object()) bad("expected an object");
    Scenario s;

    Identities ids;
    if (j.contains("identities")) {
      const auto& list = j["identities"];
      auto add = [&](const std::string& name, const Json& seed) {
        if (!valid_identifier(name)) bad("bad identity name '" + name + "'");
        wallet::Seed raw;
        if (seed.is_null()) {
          raw = derived_identity_seed(name);
        } else {
          if (!seed.is_string()) bad("identity seed must be hex or null");
          auto b = from_hex(seed.get<std::string>());
          if (!b || b->size() != raw.size()) bad("identity seed must be 32 bytes of hex");
          std::copy(b->begin(), b->end(), raw.begin());
        }
        const auto signer = wallet::Signer::from_seed(raw);
        ids[name] = Ident{raw, signer.address(), signer.public_key()};
        s.identities[name] = signer.address();
      };
      if (list.is_array()) {
        for (const auto& name : list) {
          if (!name.is_string()) bad("identity names must be strings");
          add(name.get<std::string>(), nullptr);
        }
      } else if (list.is_object()) {
        for (const auto& [name, seed] : list.items()) add(name, seed);
      } else {
        bad("identities must be an object or array");
      }
    }

    if (!j.contains("genesis")) bad("missing genesis");
    Json gj = j["genesis"];
    if (gj.is_string()) {
      std::filesystem::path p(gj.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      std::ifstream in(p, std::ios::binary);
      if (!in) bad("cannot read genesis file " + p.string());
      std::stringstream buf;
      buf << in.rdbuf();
      auto parsed = parse_json(buf.str());
      if (!parsed) bad("genesis file " + p.string() + " is not JSON");
      gj = *parsed;
    }
    auto genesis = persistence::genesis_from_json(expand(gj, ids, false));
    if (!genesis) bad(genesis.error().message);
    s.genesis = std::move(*genesis);

    auto& cfg = s.config;
    cfg.validators = s.genesis.validators;
    cfg.rng_seed = u64_or(j, "seed", 0);
    cfg.proposer_timeout = u64_or(j, "proposer_timeout", cfg.proposer_timeout);
    cfg.status_interval = u64_or(j, "status_interval", cfg.status_interval);
    cfg.max_block_txs = u64_or(j, "max_block_txs", cfg.max_block_txs);
    if (cfg.proposer_timeout == 0 || cfg.status_interval == 0 || cfg.max_block_txs == 0)
      bad("proposer_timeout, status_interval and max_block_txs must be positive");
    if (j.contains("latency")) {
      const auto& l = j["latency"];
      cfg.min_latency = u64_or(l, "min", 1);
      cfg.max_latency = u64_or(l, "max", cfg.min_latency);
      if (cfg.min_latency == 0 || cfg.max_latency < cfg.min_latency) bad("latency needs 1 <= min <= max");
    }
    cfg.faults = parse_faults(j.value("faults", Json()), cfg.validators.size());
    // max_ticks = 0 is accepted here and reported as Timeout by the run.
    s.max_ticks = u64_or(j, "max_ticks", s.max_ticks);

    std::map<Address, std::uint64_t> next_nonce;
    for (const auto& w : j.value("workload", Json::array())) {
      if (!w.is_object()) bad("workload entries must be objects");
      WorkloadEntry e;
      e.tick = u64_or(w, "tick", 0);
      e.entry = u64_or(w, "entry", 0);
      if (e.entry >= cfg.validators.size()) bad("workload entry validator out of range");
      if (w.contains("tx")) {
        e.tx = tx_from_json(w["tx"]);
      } else {
        const std::string op = str_of(w, "op");
        const std::string as = str_of(w, "as");
        const auto& signer = ident(ids, as);
        TxBody body;
        body.sender = signer.address;
        body.payload = build_op(w, ids, op, signer, as.front() == '@' ? as.substr(1) : as);
        body.nonce = w.contains("nonce") ? u64_or(w, "nonce", 0) : next_nonce[signer.address];
        next_nonce[signer.address] = body.nonce + 1;
        auto tx = wallet::Signer::from_seed(signer.seed).sign(body);
        if (!tx) bad(tx.error().message);
        e.tx = std::move(*tx);
      }
      s.workload.push_back(std::move(e));
    }
    std::stable_sort(s.workload.begin(), s.workload.end(),
                     [](const auto& a, const auto& b) { return a.tick < b.tick; });
    return s;
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  } catch (const Json::exception& e) {
    return make_error(ErrorCode::Malformed, std::string("scenario: ") + e.what());
  }
}

Result<Scenario> load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::IoError, "cannot open scenario " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = parse_json(buf.str());
  if (!j) return make_error(ErrorCode::Malformed, "scenario is not JSON");
  return parse_scenario(*j, std::filesystem::path(path).parent_path().string());
}

SimRun run_scenario(const Scenario& s, bool record_trace) {
  SimRun run;
  Network net(s.config, persistence::genesis_state(s.genesis));
  net.record_trace(record_trace);
  std::size_t next = 0;
  auto inject = [&] {
    while (next < s.workload.size() && s.workload[next].tick <= net.tick()) {
      const auto& w = s.workload[next++];
      auto r = net.submit_tx(w.entry, w.tx);
      run.submissions.push_back({net.tick(), r.tx_id, r.accepted, r.error});
    }
  };
  bool done = false;
  if (s.max_ticks > 0) {
    for (std::uint64_t i = 0; i < s.max_ticks; ++i) {
      inject();
      if (next == s.workload.size() && net.quiescent()) {
        done = true;
        break;
      }
      net.step();
    }
    inject();
    done = done || (next == s.workload.size() && net.quiescent());
  }
  run.outcome.report = net.report();
  if (!done)
    run.outcome.error = make_error(ErrorCode::Timeout, "not quiescent after " + std::to_string(s.max_ticks) + " ticks");
  for (std::size_t i = 0; i < net.size(); ++i) run.chains.push_back(net.chain(i));
  return run;
}

Json sim_run_to_json(const SimRun& run) {
  Json out = report_to_json(run.outcome.report);
  Json subs = Json::array();
  for (const auto& sub : run.submissions) {
    Json e{{"tick", sub.tick}, {"tx_id", sub.tx_id.hex()}, {"accepted", sub.accepted}};
    if (sub.error) e["error"] = {{"code", error_name(sub.error->code)}, {"message", sub.error->message}};
    subs.push_back(std::move(e));
  }
  out["submissions"] = std::move(subs);
  out["status"] = run.outcome.error ? "timeout" : "quiescent";
  return out;
}

}  // namespace chainguard::consensus
