#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qrg/bank.hpp"

namespace qrg {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 = let the OS pick
};

// "9000", ":9000" or "host:9000".
Endpoint parse_endpoint(std::string_view text);

// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void shutdown();
  void close();

 private:
  int fd_ = -1;
};

Socket connect_to(const Endpoint& ep);  // throws std::runtime_error

// Newline-delimited messages over a connected socket.
class LineChannel {
 public:
  explicit LineChannel(Socket socket) : socket_(std::move(socket)) {}

  void send_line(std::string_view line);         // appends '\n'
  std::optional<std::string> recv_line();        // nullopt on EOF

 private:
  Socket socket_;
  std::string buffer_;
};

// Wire codecs, newline-delimited JSON. Lost qubits travel as null.
std::string challenge_request_json(std::string_view serial);
std::string challenge_to_json(const Challenge& c);
Challenge challenge_from_json(std::string_view line);
std::string response_to_json(const Response& r);
Response response_from_json(std::string_view line);
std::string verdict_to_json(const Verdict& v);
Verdict verdict_from_json(std::string_view line);
std::string error_json(std::string_view message);

// Bank service: accepts connections, speaks the protocol, one thread per
// connection, all bank access serialized. Malformed or out-of-order
// messages get {"type":"error"} replies; the connection stays up.
class BankServer {
 public:
  BankServer(Bank& bank, const Endpoint& ep);
  ~BankServer();

  std::uint16_t port() const { return port_; }
  void stop();

 private:
  void accept_loop();
  void session(Socket client);

  Bank& bank_;
  std::mutex bank_mutex_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::mutex sessions_mutex_;
  std::vector<std::thread> sessions_;
  std::vector<int> session_fds_;
  bool stopping_ = false;
};

// One protocol connection from the terminal side.
class BankClient {
 public:
  explicit BankClient(const Endpoint& ep) : channel_(connect_to(ep)) {}

  Challenge request_challenge(std::string_view serial);
  Verdict send_response(const Response& response);

  // raw line exchange, for driving the protocol off the happy path
  std::string roundtrip(std::string_view line);

 private:
  LineChannel channel_;
};

}  // namespace qrg
