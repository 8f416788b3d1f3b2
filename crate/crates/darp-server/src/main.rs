use std::net::SocketAddr;

#[tokio::main]
async fn main() {
    let addr: SocketAddr = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "127.0.0.1:8080".to_string())
        .parse()
        .expect("usage: darp-server [addr:port]");
    let listener = tokio::net::TcpListener::bind(addr).await.expect("bind");
    println!("darp-server listening on {}", listener.local_addr().unwrap());
    axum::serve(listener, darp_server::app()).await.unwrap();
}
