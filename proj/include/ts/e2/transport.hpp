#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace ts::e2 {

// A reliable ordered byte pipe. Both deployment modes (embedded in-memory
// and split over TCP loopback) carry identical frame bytes through this
// interface; only the plumbing underneath differs.
class ByteChannel {
 public:
  virtual ~ByteChannel() = default;
  virtual void send(std::span<const uint8_t> bytes) = 0;
  // Non-blocking: moves whatever has arrived into `out`, returns byte count.
  virtual size_t drain(std::vector<uint8_t>& out) = 0;
  virtual bool closed() const = 0;
  virtual void close() = 0;
};

// One direction of an in-process pipe.
class InMemoryPipe {
 public:
  void write(std::span<const uint8_t> bytes);
  size_t read(std::vector<uint8_t>& out);
  void close();
  bool closed() const;

 private:
  mutable std::mutex mu_;
  std::deque<uint8_t> data_;
  bool closed_ = false;
};

// Endpoint view over a pair of pipes.
class InMemoryChannel : public ByteChannel {
 public:
  InMemoryChannel(std::shared_ptr<InMemoryPipe> tx, std::shared_ptr<InMemoryPipe> rx)
      : tx_(std::move(tx)), rx_(std::move(rx)) {}
  void send(std::span<const uint8_t> bytes) override { tx_->write(bytes); }
  size_t drain(std::vector<uint8_t>& out) override { return rx_->read(out); }
  bool closed() const override { return tx_->closed() || rx_->closed(); }
  void close() override {
    tx_->close();
    rx_->close();
  }

 private:
  std::shared_ptr<InMemoryPipe> tx_;
  std::shared_ptr<InMemoryPipe> rx_;
};

// Two connected endpoints, like socketpair().
std::pair<std::unique_ptr<ByteChannel>, std::unique_ptr<ByteChannel>> make_in_memory_pair();

// TCP client side; connects on construction, non-blocking reads.
class TcpChannel : public ByteChannel {
 public:
  TcpChannel(const std::string& host, uint16_t port);
  explicit TcpChannel(int connected_fd);
  ~TcpChannel() override;

  void send(std::span<const uint8_t> bytes) override;
  size_t drain(std::vector<uint8_t>& out) override;
  bool closed() const override { return fd_ < 0; }
  void close() override;

 private:
  int fd_ = -1;
};

// Minimal accept loop wrapper; the RIC service owns one of these.
class TcpServer {
 public:
  explicit TcpServer(const std::string& bind_addr, uint16_t port);
  ~TcpServer();

  uint16_t port() const { return port_; }
  // Non-blocking accept; nullptr when no connection is pending.
  std::unique_ptr<TcpChannel> accept();
  void close();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

}  // namespace ts::e2
