// Standalone cloud server. This binary is the honest-but-curious party, so
// it links p3core only; the build has no path from here to key material.
//
// Types allowed to cross into this binary (the audit list):
//   GroupParams, GroupElement, PairingValue, CurveGroup, PublicParams,
//   IndexKeywordId, TrapdoorKeywordId, SecureIndex, Trapdoor, QueryEngine,
//   WireMessage and the payload codecs.
// Never present here: MasterKey, BgnSecretKey, KnnSecrets, FeistelPrp,
// OwnerContext/OwnerService, prf_eval, gen_trapdoor, bgn_decrypt,
// make_dispersal_factor, or the document key. The acceptance suite checks
// the binary's symbol table against this list.

#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "p3/service.hpp"

namespace {
std::atomic<bool> g_stop{false};
void handle_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P3 cloud server (index hosting + encrypted query execution)"};
  uint16_t port = 7733;
  app.add_option("--port", port, "listen port (0 = ephemeral)");
  CLI11_PARSE(app, argc, argv);

  p3::CloudServer server;
  uint16_t bound = server.start(port);
  std::cout << "cloud server listening on 127.0.0.1:" << bound << "\n" << std::flush;

  struct sigaction sa{};
  sa.sa_handler = handle_signal;
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
  while (!g_stop) {
    timespec ts{0, 200 * 1000 * 1000};
    nanosleep(&ts, nullptr);
  }
  server.stop();
  return 0;
}
