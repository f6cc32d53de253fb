namespace tropscat {}
