pub mod connection;
pub mod fredholm;
pub mod ncalg;
pub mod paramfield;
pub mod quantumhopf;
pub mod subspan;
