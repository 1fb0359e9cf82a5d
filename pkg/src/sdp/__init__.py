# SDP package
