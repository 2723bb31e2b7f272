int main() { return 2; }  // CLI not assembled yet
