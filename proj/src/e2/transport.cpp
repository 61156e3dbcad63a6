#include "ts/e2/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace ts::e2 {

void InMemoryPipe::write(std::span<const uint8_t> bytes) {
  std::lock_guard lk(mu_);
  data_.insert(data_.end(), bytes.begin(), bytes.end());
}

size_t InMemoryPipe::read(std::vector<uint8_t>& out) {
  std::lock_guard lk(mu_);
  size_t n = data_.size();
  out.insert(out.end(), data_.begin(), data_.end());
  data_.clear();
  return n;
}

void InMemoryPipe::close() {
  std::lock_guard lk(mu_);
  closed_ = true;
}

bool InMemoryPipe::closed() const {
  std::lock_guard lk(mu_);
  return closed_;
}

std::pair<std::unique_ptr<ByteChannel>, std::unique_ptr<ByteChannel>> make_in_memory_pair() {
  auto a_to_b = std::make_shared<InMemoryPipe>();
  auto b_to_a = std::make_shared<InMemoryPipe>();
  return {std::make_unique<InMemoryChannel>(a_to_b, b_to_a),
          std::make_unique<InMemoryChannel>(b_to_a, a_to_b)};
}

namespace {

void set_nonblocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

TcpChannel::TcpChannel(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error("socket(): " + std::string(strerror(errno)));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("bad address: " + host);
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("connect(" + host + "): " + std::string(strerror(errno)));
  }
  int one = 1;
  setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  set_nonblocking(fd_);
}

TcpChannel::TcpChannel(int connected_fd) : fd_(connected_fd) {
  int one = 1;
  setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  set_nonblocking(fd_);
}

TcpChannel::~TcpChannel() { close(); }

void TcpChannel::send(std::span<const uint8_t> bytes) {
  size_t off = 0;
  while (off < bytes.size() && fd_ >= 0) {
    ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n > 0) {
      off += static_cast<size_t>(n);
    } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      continue;  // peer is draining; spin until the kernel buffer frees up
    } else {
      close();
      return;
    }
  }
}

size_t TcpChannel::drain(std::vector<uint8_t>& out) {
  if (fd_ < 0) return 0;
  size_t total = 0;
  uint8_t buf[4096];
  while (true) {
    ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
    if (n > 0) {
      out.insert(out.end(), buf, buf + n);
      total += static_cast<size_t>(n);
    } else if (n == 0) {
      close();
      break;
    } else if (errno == EAGAIN || errno == EWOULDBLOCK) {
      break;
    } else {
      close();
      break;
    }
  }
  return total;
}

void TcpChannel::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpServer::TcpServer(const std::string& bind_addr, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error("socket(): " + std::string(strerror(errno)));
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("bad bind address: " + bind_addr);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("bind(" + bind_addr + "): " + std::string(strerror(errno)));
  }
  if (::listen(fd_, 64) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("listen(): " + std::string(strerror(errno)));
  }
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  set_nonblocking(fd_);
}

TcpServer::~TcpServer() { close(); }

std::unique_ptr<TcpChannel> TcpServer::accept() {
  if (fd_ < 0) return nullptr;
  int cfd = ::accept(fd_, nullptr, nullptr);
  if (cfd < 0) return nullptr;
  return std::make_unique<TcpChannel>(cfd);
}

void TcpServer::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace ts::e2
