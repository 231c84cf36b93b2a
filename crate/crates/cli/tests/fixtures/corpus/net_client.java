package app.net;

import java.net.Socket;

class UploadClient {
    Socket sock;

    void push() {
        sock.connect();
        sock.send();
        sock.close();
    }
}
