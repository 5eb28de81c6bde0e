// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0
//
// chainguard: wallet, identity and permission client for a ChainGuard node.
//
// Exit codes: 0 ok, 1 other failure (including simulation timeout), 2 usage,
// 3 API error, 4 verification failure.

#include <httplib.h>
#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "chainguard.h"

using Json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kApiError = 3, kVerifyFailed = 4 };

struct Options {
  std::string config_path;
  std::string node_url;
  std::string wallet_path;
  std::string output;
  bool json() const { return output == "json"; }
};

struct CliError {
  int exit_code;
  std::string code;
  std::string message;
  Json extra = Json::object();
};

struct CString {
  char* p = nullptr;
  ~CString() { cg_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct WalletHandle {
  cg_wallet* w = nullptr;
  ~WalletHandle() { cg_wallet_free(w); }
};

[[noreturn]] void throw_status(cg_status st, int exit_code = kFailure) {
  throw CliError{exit_code, cg_status_name(st), cg_last_error()};
}

std::string default_config_path() {
  if (const char* p = std::getenv("CHAINGUARD_CLI_CONFIG")) return p;
  if (const char* home = std::getenv("HOME")) return std::string(home) + "/.config/chainguard/cli.json";
  return "";
}

void load_config(Options& o) {
  // Flags win over the file; the file wins over built-in defaults.
  std::string url = "http://127.0.0.1:8645", wallet = "wallet.json", output = "human";
  const std::string path = o.config_path.empty() ? default_config_path() : o.config_path;
  std::ifstream in(path);
  if (in) {
    Json j = Json::parse(in, nullptr, false);
    if (!j.is_object()) throw CliError{kUsage, "Malformed", "config file " + path + " is not a JSON object"};
    url = j.value("node_url", url);
    wallet = j.value("wallet_path", wallet);
    output = j.value("output", output);
  } else if (!o.config_path.empty()) {
    throw CliError{kUsage, "IoError", "cannot read config file " + path};
  }
  if (o.node_url.empty()) o.node_url = url;
  if (o.wallet_path.empty()) o.wallet_path = wallet;
  if (o.output.empty()) o.output = output;
  if (o.output != "human" && o.output != "json") throw CliError{kUsage, "Malformed", "--output must be human or json"};
  if (o.node_url.rfind("http://", 0) != 0 || o.node_url.size() <= 7)
    throw CliError{kUsage, "Malformed", "node_url must look like http://host:port"};
}

std::string read_passphrase(const std::string& prompt, bool confirm) {
  if (const char* env = std::getenv("CHAINGUARD_PASSPHRASE")) return env;
  FILE* tty = std::fopen("/dev/tty", "r+");
  if (!tty) throw CliError{kUsage, "MissingParam", "no terminal for the passphrase prompt; set CHAINGUARD_PASSPHRASE"};
  auto ask = [&](const std::string& text) {
    std::fputs(text.c_str(), tty);
    std::fflush(tty);
    termios old{};
    const int fd = fileno(tty);
    const bool have_term = tcgetattr(fd, &old) == 0;
    if (have_term) {
      termios quiet = old;
      quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
      tcsetattr(fd, TCSAFLUSH, &quiet);
    }
    std::string line;
    for (int c; (c = std::fgetc(tty)) != EOF && c != '\n';) line.push_back(static_cast<char>(c));
    if (have_term) tcsetattr(fd, TCSAFLUSH, &old);
    std::fputs("\n", tty);
    return line;
  };
  std::string pass = ask(prompt);
  if (confirm && ask("Repeat passphrase: ") != pass) {
    std::fclose(tty);
    throw CliError{kUsage, "BadPassphrase", "passphrases do not match"};
  }
  std::fclose(tty);
  return pass;
}

class Api {
 public:
  explicit Api(const std::string& url) : client_(url) {
    client_.set_connection_timeout(5);
    client_.set_read_timeout(30);
  }

  Json get(const std::string& path, const httplib::Params& params = {}) {
    auto res = client_.Get(path, params, httplib::Headers{}, httplib::Progress{});
    return check(res, "GET " + path);
  }

  Json post(const std::string& path, const std::string& body) {
    auto res = client_.Post(path, body, "application/json");
    return check(res, "POST " + path);
  }

 private:
  Json check(const httplib::Result& res, const std::string& what) {
    if (!res) throw CliError{kApiError, "Unavailable", what + ": " + httplib::to_string(res.error())};
    Json body = Json::parse(res->body, nullptr, false);
    if (body.is_discarded()) throw CliError{kApiError, "Malformed", what + ": response is not JSON"};
    if (res->status >= 400) {
      CliError e{kApiError, body.value("code", "Internal"), body.value("message", "")};
      if (body.contains("height")) e.extra["height"] = body["height"];
      throw e;
    }
    return body;
  }

  httplib::Client client_;
};

void emit(const Options& o, const Json& j, const std::string& human) {
  if (o.json())
    std::cout << j.dump() << "\n";
  else
    std::cout << human << "\n";
}

Json wallet_info(cg_wallet* w) {
  CString s;
  if (auto st = cg_wallet_info(w, &s.p); st != CG_OK) throw_status(st);
  return Json::parse(s.str());
}

void load_wallet(const Options& o, WalletHandle& h) {
  if (auto st = cg_wallet_load(o.wallet_path.c_str(), &h.w); st != CG_OK) throw_status(st, kUsage);
}

struct SubmitOptions {
  bool wait = true;
  double timeout_s = 30;
};

// Signs `payload` with the wallet, submits it and (optionally) waits until
// the entry node reports it committed or rejected.
void submit(const Options& o, const SubmitOptions& so, const Json& payload) {
  WalletHandle wallet;
  load_wallet(o, wallet);
  const std::string address = wallet_info(wallet.w)["address"];
  const std::string pass = read_passphrase("Passphrase: ", false);
  Api api(o.node_url);
  const auto nonce = api.get("/v1/accounts/" + address + "/nonce")["next_nonce"].get<std::uint64_t>();

  CString tx;
  if (auto st = cg_wallet_sign(wallet.w, pass.c_str(), nonce, payload.dump().c_str(), &tx.p); st != CG_OK)
    throw_status(st, st == CG_BAD_PASSPHRASE ? kUsage : kFailure);
  const Json accepted = api.post("/v1/transactions", tx.str());
  const std::string id = accepted["tx_id"];

  Json result{{"tx_id", id}, {"status", "pending"}, {"nonce", nonce}};
  if (so.wait) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(so.timeout_s);
    for (;;) {
      Json status;
      try {
        status = api.get("/v1/transactions/" + id);
      } catch (const CliError& e) {
        if (e.code != "NotFound") throw;
      }
      const std::string s = status.value("status", "pending");
      if (s == "committed") {
        result["status"] = s;
        result["height"] = status["height"];
        break;
      }
      if (s == "rejected") {
        const Json& err = status["error"];
        CliError e{kApiError, err.value("code", "Internal"), err.value("message", "transaction rejected")};
        e.extra["tx_id"] = id;
        throw e;
      }
      if (std::chrono::steady_clock::now() > deadline) {
        CliError e{kApiError, "Timeout", "transaction " + id + " not committed in time"};
        e.extra["tx_id"] = id;
        throw e;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
  std::string human = result["status"].get<std::string>() + " " + id;
  if (result.contains("height")) human += " at height " + std::to_string(result["height"].get<std::uint64_t>());
  emit(o, result, human);
}

std::string role_list(const Json& roles) {
  std::string out;
  for (const auto& r : roles) out += (out.empty() ? "" : ",") + r.get<std::string>();
  return out.empty() ? "-" : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ChainGuard identity and access-control client"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Client config file (JSON: node_url, wallet_path, output)");
  app.add_option("--node", o.node_url, "Node API base URL");
  app.add_option("--wallet", o.wallet_path, "Wallet file");
  app.add_option("--output", o.output, "human or json");

  SubmitOptions so;
  auto add_submit_flags = [&](CLI::App* cmd) {
    cmd->add_flag("!--no-wait", so.wait, "Return once the node accepts the transaction");
    cmd->add_option("--timeout", so.timeout_s, "Seconds to wait for commitment");
  };

  // wallet
  auto* wallet = app.add_subcommand("wallet", "Local key management");
  wallet->require_subcommand(1);
  auto* wcreate = wallet->add_subcommand("create", "Create a wallet file");
  std::string seed;
  std::uint32_t iterations = 0;
  bool force = false;
  wcreate->add_option("--seed", seed, "32-byte hex seed (deterministic key)");
  wcreate->add_option("--iterations", iterations, "Key-derivation iterations");
  wcreate->add_flag("--force", force, "Overwrite an existing wallet file");
  auto* wshow = wallet->add_subcommand("show", "Print the wallet address and public key");

  // user / role
  std::string org, role, user, old_role = "none", new_role, resource, action;
  auto* userc = app.add_subcommand("user", "User registration");
  userc->require_subcommand(1);
  auto* reg = userc->add_subcommand("register", "Register the wallet identity in an organization");
  reg->add_option("--org", org)->required();
  reg->add_option("--role", role)->required();
  add_submit_flags(reg);

  auto* rolec = app.add_subcommand("role", "Role assignment");
  rolec->require_subcommand(1);
  auto* rupdate = rolec->add_subcommand("update", "Change a user's role in an organization");
  rupdate->add_option("--user", user, "Target user address (default: the wallet)");
  rupdate->add_option("--org", org)->required();
  rupdate->add_option("--old", old_role, "Role to replace, or none to add");
  rupdate->add_option("--new", new_role)->required();
  add_submit_flags(rupdate);

  // perm
  auto* perm = app.add_subcommand("perm", "Role permissions");
  perm->require_subcommand(1);
  auto add_perm_flags = [&](CLI::App* cmd) {
    cmd->add_option("--org", org)->required();
    cmd->add_option("--resource", resource)->required();
    cmd->add_option("--action", action)->required();
  };
  auto* grant = perm->add_subcommand("grant", "Grant a permission to a role");
  grant->add_option("--role", role)->required();
  add_perm_flags(grant);
  add_submit_flags(grant);
  auto* revoke = perm->add_subcommand("revoke", "Revoke a permission from a role");
  revoke->add_option("--role", role)->required();
  add_perm_flags(revoke);
  add_submit_flags(revoke);
  auto* check = perm->add_subcommand("check", "Check whether a user holds a permission");
  check->add_option("--user", user)->required();
  add_perm_flags(check);

  // chain
  auto* chain = app.add_subcommand("chain", "Offline chain inspection");
  chain->require_subcommand(1);
  auto* verify = chain->add_subcommand("verify", "Verify a chain.jsonl file");
  std::string file, genesis;
  verify->add_option("file", file)->required();
  verify->add_option("--genesis", genesis, "Genesis file (default: genesis.json beside the chain)");

  // events
  auto* events = app.add_subcommand("events", "Audit log");
  events->require_subcommand(1);
  auto* tail = events->add_subcommand("tail", "Print committed events");
  std::string kind;
  std::uint64_t from_height = 0;
  std::size_t limit = 0;
  tail->add_option("--kind", kind);
  tail->add_option("--org", org);
  tail->add_option("--user", user);
  tail->add_option("--from-height", from_height);
  tail->add_option("--limit", limit, "Only the last N events");

  // sim
  auto* sim = app.add_subcommand("sim", "Deterministic network simulation");
  sim->require_subcommand(1);
  auto* simrun = sim->add_subcommand("run", "Run a scenario file and print its report");
  std::string scenario, chains_dir, report_path;
  simrun->add_option("scenario", scenario)->required();
  simrun->add_option("--chains-dir", chains_dir, "Write each validator's chain here");
  simrun->add_option("--report", report_path, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    load_config(o);

    if (wcreate->parsed()) {
      if (!force && std::ifstream(o.wallet_path))
        throw CliError{kUsage, "AlreadyRegistered", o.wallet_path + " exists; pass --force to overwrite"};
      const std::string pass = read_passphrase("New passphrase: ", true);
      WalletHandle w;
      if (auto st = cg_wallet_create(seed.empty() ? nullptr : seed.c_str(), pass.c_str(), iterations, &w.w);
          st != CG_OK)
        throw_status(st, st == CG_WEAK_PASSPHRASE || st == CG_MALFORMED ? kUsage : kFailure);
      if (auto st = cg_wallet_save(w.w, o.wallet_path.c_str()); st != CG_OK) throw_status(st);
      Json info = wallet_info(w.w);
      info["path"] = o.wallet_path;
      emit(o, info, "address    " + info["address"].get<std::string>() + "\npublic_key " +
                        info["public_key"].get<std::string>() + "\nsaved to   " + o.wallet_path);
    } else if (wshow->parsed()) {
      WalletHandle w;
      load_wallet(o, w);
      Json info = wallet_info(w.w);
      info["path"] = o.wallet_path;
      emit(o, info, "address    " + info["address"].get<std::string>() + "\npublic_key " +
                        info["public_key"].get<std::string>());
    } else if (reg->parsed()) {
      WalletHandle w;
      load_wallet(o, w);
      CString payload;
      if (auto st = cg_wallet_register_payload(w.w, org.c_str(), role.c_str(), &payload.p); st != CG_OK)
        throw_status(st);
      submit(o, so, Json::parse(payload.str()));
    } else if (rupdate->parsed()) {
      if (user.empty()) {
        WalletHandle w;
        load_wallet(o, w);
        user = wallet_info(w.w)["address"];
      }
      submit(o, so,
             Json{{"type", "UpdateUserRole"}, {"user", user}, {"org", org}, {"old_role", old_role}, {"new_role", new_role}});
    } else if (grant->parsed() || revoke->parsed()) {
      submit(o, so,
             Json{{"type", grant->parsed() ? "GrantPermission" : "RevokePermission"},
                  {"org", org},
                  {"role", role},
                  {"permission", {{"resource", resource}, {"action", action}}}});
    } else if (check->parsed()) {
      Api api(o.node_url);
      const Json r = api.get("/v1/permissions/check",
                             {{"user", user}, {"org", org}, {"resource", resource}, {"action", action}});
      const bool granted = r["granted"];
      emit(o, r,
           std::string(granted ? "granted" : "denied") + " via_roles=" + role_list(r["via_roles"]) +
               " height=" + std::to_string(r["height"].get<std::uint64_t>()));
    } else if (verify->parsed()) {
      if (genesis.empty()) {
        const auto slash = file.find_last_of('/');
        genesis = (slash == std::string::npos ? std::string() : file.substr(0, slash + 1)) + "genesis.json";
      }
      CString summary;
      std::uint64_t height = 0;
      const auto st = cg_chain_verify_file(file.c_str(), genesis.c_str(), &height, &summary.p);
      if (st == CG_VERIFICATION_FAILED) {
        CliError e{kVerifyFailed, cg_status_name(st), cg_last_error()};
        e.extra["height"] = height;
        throw e;
      }
      if (st != CG_OK) throw_status(st);
      const Json s = Json::parse(summary.str());
      emit(o, s,
           "ok: " + std::to_string(s["blocks"].get<std::uint64_t>()) + " blocks, tip " +
               s["tip_hash"].get<std::string>());
    } else if (tail->parsed()) {
      Api api(o.node_url);
      httplib::Params q{{"from_height", std::to_string(from_height)}};
      if (!kind.empty()) q.emplace("kind", kind);
      if (!org.empty()) q.emplace("org", org);
      if (!user.empty()) q.emplace("user", user);
      Json r = api.get("/v1/events", q);
      Json& list = r["events"];
      if (limit && list.size() > limit) list.erase(list.begin(), list.end() - static_cast<std::ptrdiff_t>(limit));
      std::ostringstream human;
      for (const auto& e : list) {
        human << e["height"] << ":" << e["tx_index"] << " " << e["kind"].get<std::string>() << " org="
              << e["org"].get<std::string>();
        for (const char* k : {"user", "role", "old_role", "new_role", "actor"})
          if (e.contains(k)) human << " " << k << "=" << e[k].get<std::string>();
        if (e.contains("permission"))
          human << " permission=" << e["permission"]["resource"].get<std::string>() << ":"
                << e["permission"]["action"].get<std::string>();
        human << "\n";
      }
      std::string text = human.str();
      if (!text.empty()) text.pop_back();
      emit(o, r, text.empty() ? "(no events)" : text);
    } else if (simrun->parsed()) {
      CString report;
      const auto st = cg_sim_run(scenario.c_str(), chains_dir.empty() ? nullptr : chains_dir.c_str(), &report.p);
      if (st != CG_OK && st != CG_TIMEOUT) throw_status(st, st == CG_MALFORMED || st == CG_IO_ERROR ? kUsage : kFailure);
      if (!report_path.empty()) std::ofstream(report_path) << report.str() << "\n";
      const Json r = Json::parse(report.str());
      std::ostringstream human;
      human << r["status"].get<std::string>() << " after " << r["ticks"] << " ticks, "
            << r["events"].size() << " events, safety_violations=" << r["safety_violations"];
      for (const auto& n : r["nodes"])
        human << "\n  " << n["id"].get<std::string>() << (n["up"].get<bool>() ? " up   " : " down ") << "height "
              << n["height"] << " state_root " << n["state_root"].get<std::string>();
      emit(o, r, human.str());
      if (st == CG_TIMEOUT) return kFailure;
    }
  } catch (const CliError& e) {
    Json err{{"code", e.code}, {"message", e.message}};
    err.update(e.extra);
    if (o.json())
      std::cout << Json{{"error", err}}.dump() << "\n";
    else {
      std::cerr << "error: " << e.code << ": " << e.message;
      if (e.extra.contains("height")) std::cerr << " (height " << e.extra["height"] << ")";
      std::cerr << "\n";
    }
    return e.exit_code;
  }
  return kOk;
}
