#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrg/experiment.hpp"

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

std::string report_json(const qrg::TransactReport& r) {
  nlohmann::json j;
  j["sessions"] = r.sessions;
  j["accepted"] = r.accepted;
  j["acceptance_fraction"] = r.acceptance_fraction;
  j["mean_error_rate"] = r.mean_error_rate;
  j["mean_loss_rate"] = r.mean_loss_rate;
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-retrieval-game money: token minting, bank verification, "
               "the cloning attack and salt recovery"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file mirroring the long flags");
  app.fallthrough();

  qrg::RunConfig cfg;
  std::string strategy = "ii";
  std::string hash = "sha512";

  app.add_option("--seed", cfg.seed, "root seed for every random stream")->capture_default_str();
  app.add_option("--fidelity", cfg.clone.fidelity, "per-clone fidelity F")->capture_default_str();
  app.add_option("--success-prob", cfg.clone.success, "per-qubit cloning success P")
      ->capture_default_str();
  app.add_option("--strategy", strategy, "terminal strategy: i, ii or iii")->capture_default_str();
  app.add_option("--hash", hash, "encoding hash: md5, sha1, sha256 or sha512")
      ->capture_default_str();
  app.add_option("--salt", cfg.spec.salt, "the bank's secret salt (decimal string)")
      ->capture_default_str();
  app.add_option("--salt-digits", cfg.salt_digits, "width of the salt search space")
      ->capture_default_str();
  app.add_option("--pairs-per-token", cfg.spec.pairs_per_token, "qubit pairs per token")
      ->capture_default_str();
  app.add_option("--keystream-len", cfg.spec.keystream_len, "keystream bytes per token")
      ->capture_default_str();
  app.add_option("--serials", cfg.serials, "how many serials to issue")->capture_default_str();
  app.add_option("--z", cfg.recovery.z_multiple, "stopping rule: leader must beat the rest by z sigma")
      ->capture_default_str();
  app.add_option("--prune-every", cfg.recovery.prune_every, "serial batches between prunes")
      ->capture_default_str();
  app.add_option("--keep", cfg.recovery.keep_fraction, "fraction of candidates kept per prune")
      ->capture_default_str();
  app.add_option("--max-pairs", cfg.recovery.max_pairs, "pair budget for recovery (0 = unlimited)")
      ->capture_default_str();
  app.add_option("--error-threshold", cfg.thresholds.max_error, "bank acceptance: max error rate")
      ->capture_default_str();
  app.add_option("--loss-threshold", cfg.thresholds.max_loss, "bank acceptance: max loss rate")
      ->capture_default_str();
  app.add_flag("--post-select,!--no-post-select", cfg.post_select,
               "sample the cloner conditioned on success")
      ->capture_default_str();
  app.add_flag("--generalized", cfg.generalized, "search all four hash functions");

  auto* curves = app.add_subcommand("curves", "error-rate / mutual-information trade-off CSV");
  qrg::CurveRequest curve_req;
  std::string curves_out;
  curves->add_option("--f-min", curve_req.f_lo, "lowest fidelity")->capture_default_str();
  curves->add_option("--f-max", curve_req.f_hi, "highest fidelity")->capture_default_str();
  curves->add_option("--points", curve_req.points, "grid size")->capture_default_str();
  curves->add_flag("--conditional", curve_req.conditional,
                   "condition on both qubits cloned (post-selected information)");
  curves->add_option("--out", curves_out, "output path (default stdout)");

  auto* attack = app.add_subcommand("attack", "run the compromised-terminal attack end to end");
  std::string attack_out, sniff_out, constraints_out;
  attack->add_option("--out", attack_out, "recovery result JSON (default stdout)");
  attack->add_option("--sniff-out", sniff_out, "write the sniff log (JSON lines)");
  attack->add_option("--constraints-out", constraints_out, "write extracted constraints (CSV)");

  auto* table1 = app.add_subcommand("table1", "minimal pair budget per hash function");
  int trials = 10;
  std::string table1_out;
  table1->add_option("--trials", trials, "seeded trials per hash")->capture_default_str();
  table1->add_option("--out", table1_out, "output path (default stdout)");

  auto* serve = app.add_subcommand("serve", "run the bank service");
  std::string listen = "127.0.0.1:0";
  std::string ledger_path;
  bool double_spend = false;
  serve->add_option("--listen", listen, "address to listen on (port 0 = ephemeral)")
      ->capture_default_str();
  serve->add_option("--ledger", ledger_path, "persist issued serials to this JSON-lines file");
  serve->add_flag("--double-spend", double_spend, "refuse challenges for spent serials");

  auto* transact = app.add_subcommand("transact", "spend tokens against a bank service");
  std::string connect, transact_out;
  bool honest = false;
  transact->add_option("--connect", connect, "bank address host:port")->required();
  transact->add_option("--sessions", cfg.serials, "how many serials to spend");
  transact->add_flag("--honest", honest, "honest terminal instead of the attack strategy");
  transact->add_option("--out", transact_out, "report JSON path (default stdout)");

  auto* mint = app.add_subcommand("mint", "mint tokens and print them as JSON lines");
  std::vector<std::string> mint_serials;
  std::string mint_out;
  mint->add_option("--serial", mint_serials, "serial to mint (repeatable; default: the run's list)");
  mint->add_option("--out", mint_out, "output path (default stdout)");

  auto* crack = app.add_subcommand("crack", "recover the salt from a constraint CSV");
  std::string constraints_path, crack_out;
  int pairs_per_serial = 40;
  crack->add_option("--constraints", constraints_path, "constraint CSV from an attack run")
      ->required();
  crack->add_option("--pairs-per-serial", pairs_per_serial,
                    "pair budget charged per serial (0 = one per constraint)")
      ->capture_default_str();
  crack->add_option("--out", crack_out, "recovery result JSON (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (const char* env_seed = std::getenv("QRG_SEED"); env_seed && *env_seed)
      cfg.seed = std::strtoull(env_seed, nullptr, 10);
    cfg.strategy = qrg::strategy_from_string(strategy);
    cfg.spec.hash = qrg::hash_from_string(hash);

    if (app.got_subcommand(curves)) {
      curve_req.strategy = cfg.strategy;
      curve_req.success = cfg.clone.success;
      emit(curves_out, qrg::run_curves(curve_req));
    } else if (app.got_subcommand(attack)) {
      const qrg::AttackRun run = qrg::run_attack(cfg);
      if (!sniff_out.empty()) {
        std::ofstream f(sniff_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + sniff_out + " for writing");
        qrg::write_sniff_log(f, run.records);
      }
      if (!constraints_out.empty()) {
        std::vector<qrg::Constraint> all;
        for (const qrg::ConstraintBatch& b : run.batches)
          all.insert(all.end(), b.constraints.begin(), b.constraints.end());
        std::ofstream f(constraints_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + constraints_out + " for writing");
        qrg::write_constraints_csv(f, all);
      }
      emit(attack_out, qrg::result_to_json(run.result) + "\n");
    } else if (app.got_subcommand(table1)) {
      const std::vector<qrg::Table1Row> rows = qrg::run_table1(cfg, trials);
      std::ostringstream os;
      qrg::write_table1_csv(os, rows);
      emit(table1_out, os.str());
    } else if (app.got_subcommand(serve)) {
      const qrg::Endpoint ep = qrg::parse_endpoint(listen);
      qrg::Bank bank = ledger_path.empty() ? qrg::make_bank(cfg)
                                           : qrg::make_bank(cfg, qrg::Ledger::open(ledger_path));
      bank.set_double_spend_protection(double_spend);
      qrg::BankServer server(bank, ep);
      std::cout << "listening on " << ep.host << ":" << server.port() << std::endl;
      for (;;) pause();
    } else if (app.got_subcommand(transact)) {
      const qrg::TransactReport rep = qrg::run_transact(cfg, qrg::parse_endpoint(connect), honest);
      emit(transact_out, report_json(rep) + "\n");
    } else if (app.got_subcommand(mint)) {
      if (mint_serials.empty()) mint_serials = qrg::make_serials(cfg.serials);
      std::string out;
      for (const std::string& serial : mint_serials)
        out += qrg::token_to_json(qrg::mint_token(cfg.spec, serial)) + "\n";
      emit(mint_out, out);
    } else if (app.got_subcommand(crack)) {
      std::ifstream f(constraints_path);
      if (!f) throw std::runtime_error("cannot open " + constraints_path);
      const std::vector<qrg::Constraint> cs = qrg::read_constraints_csv(f);
      const std::vector<qrg::ConstraintBatch> batches = qrg::batch_by_serial(cs, pairs_per_serial);
      const std::vector<std::string> space = qrg::make_salt_space(cfg.salt_digits);
      qrg::RecoveryResult result;
      if (cfg.generalized) {
        result = qrg::generalized_recover(batches, space, cfg.recovery);
      } else {
        const qrg::HashId hashes[] = {cfg.spec.hash};
        result = qrg::recover(batches, hashes, space, cfg.recovery);
      }
      emit(crack_out, qrg::result_to_json(result) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
