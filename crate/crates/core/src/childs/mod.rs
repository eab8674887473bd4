//! Computing on one-time-padded data: Pauli key tracking through Clifford
//! gates, the interactive T-gate gadget and circuit hiding by a fixed gate
//! cycle.

mod hidden;
mod key;
mod session;

pub use hidden::{hidden_schedule, run_hidden_circuit, Slot, Step};
pub use key::{conjugation_table, key_update_clifford, qotp_decrypt, qotp_encrypt, ConjugationRow, PauliKey};
pub use session::{apply_t_gadget, run_encrypted_circuit, ChildsDriver, ChildsRun, EncryptedRegister};
