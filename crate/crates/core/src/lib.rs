pub mod certify;
pub mod field;
pub mod io;
pub mod linalg;
pub mod numtheory;
pub mod structured;
pub mod tuples;
